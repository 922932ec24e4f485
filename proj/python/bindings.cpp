#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fishpipe/diagnostics.hpp"
#include "fishpipe/eval.hpp"
#include "fishpipe/geometry.hpp"
#include "fishpipe/hashing.hpp"
#include "fishpipe/image.hpp"
#include "fishpipe/reports.hpp"
#include "fishpipe/scene.hpp"
#include "fishpipe/split.hpp"
#include "fishpipe/yolo.hpp"

namespace py = pybind11;
using namespace fishpipe;

namespace {

NormalizedBox box_of(const std::tuple<double, double, double, double>& t) {
    return {std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)};
}

}  // namespace

PYBIND11_MODULE(pyfishpipe, m) {
    m.doc() = "Corpus-reliability toolkit for underwater detection datasets";

    m.def("iou",
          [](std::tuple<double, double, double, double> a,
             std::tuple<double, double, double, double> b) {
              return iou(box_of(a), box_of(b));
          },
          py::arg("a"), py::arg("b"),
          "IoU of two normalized (cx, cy, w, h) boxes");

    m.def("md5_hex",
          [](const py::bytes& data) { return md5_hex(std::string(data)); },
          "MD5 digest of a byte string, lowercase hex");

    m.def("hamming", &hamming, py::arg("a"), py::arg("b"),
          "Hamming distance between two 64-bit hashes");

    m.def("average_hash",
          [](const std::string& path) { return average_hash(load_image(path)); },
          py::arg("path"), "64-bit perceptual hash of an image file");

    m.def("prf",
          [](long tp, long fp, long fn) {
              const Prf r = prf(tp, fp, fn);
              py::dict d;
              d["tp"] = r.tp;
              d["fp"] = r.fp;
              d["fn"] = r.fn;
              d["precision"] = r.precision ? py::object(py::float_(*r.precision))
                                           : py::object(py::none());
              d["recall"] = r.recall ? py::object(py::float_(*r.recall))
                                     : py::object(py::none());
              d["f1"] = r.f1;
              return d;
          },
          py::arg("tp"), py::arg("fp"), py::arg("fn"),
          "Precision, recall and F1 from match counts");

    m.def("parse_yolo",
          [](const std::string& text, int width_px, int height_px) {
              const auto res = parse_yolo_label_file(text, width_px, height_px);
              std::vector<std::tuple<int, double, double, double, double>> out;
              for (const auto& a : res.annotations)
                  out.emplace_back(a.class_id, a.box.cx, a.box.cy, a.box.w,
                                   a.box.h);
              return out;
          },
          py::arg("text"), py::arg("width_px") = 1, py::arg("height_px") = 1,
          "Parse YOLO label text into (cls, cx, cy, w, h) rows");

    m.def("serialize_yolo",
          [](const std::vector<std::tuple<int, double, double, double, double>>&
                 rows) {
              std::vector<Annotation> anns;
              for (const auto& [cls, cx, cy, w, h] : rows)
                  anns.push_back({cls, {cx, cy, w, h}});
              return serialize_yolo(anns);
          },
          py::arg("rows"), "Serialize (cls, cx, cy, w, h) rows as YOLO text");

    m.def("density_bin", &density_bin, py::arg("count"),
          "Density stratum label for an object count");

    m.def("split_assign",
          [](const std::vector<std::tuple<std::string, std::string, bool>>& recs,
             uint64_t seed) {
              std::vector<ImageRecord> records;
              for (const auto& [id, source, positive] : recs) {
                  ImageRecord r;
                  r.image_id = id;
                  r.source = source;
                  r.path = id;
                  r.width_px = 1;
                  r.height_px = 1;
                  if (positive) r.annotations.push_back({0, {0.5, 0.5, 0.2, 0.2}});
                  records.push_back(std::move(r));
              }
              SplitPlan plan;
              plan.seed = seed;
              const auto sa = two_step_split(records, plan);
              std::vector<std::string> out;
              for (Split s : sa.assignment) out.push_back(to_string(s));
              return out;
          },
          py::arg("records"), py::arg("seed"),
          "Stratified 0.70/0.20/0.10 assignment for (image_id, source, "
          "has_annotations) records");

    m.def("diagnose",
          [](const std::string& path) {
              const DiagnosticVector d =
                  compute_diagnostics(load_image(path), {});
              py::dict out;
              out["turbidity"] = d.turbidity;
              out["rms_contrast"] = d.rms_contrast;
              out["blur_var"] = d.blur_var;
              out["ratio_r"] = d.ratio_r;
              out["ratio_g"] = d.ratio_g;
              out["ratio_b"] = d.ratio_b;
              out["uicm"] = d.uicm;
              out["uism"] = d.uism;
              out["uiconm"] = d.uiconm;
              out["uiqm"] = d.uiqm;
              out["uciqe"] = d.uciqe;
              return out;
          },
          py::arg("path"), "Visual-degradation covariates of an image file");

    m.def("correlate",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              const Correlation c = correlate(x, y);
              py::dict d;
              d["pearson"] = c.pearson ? py::object(py::float_(*c.pearson))
                                       : py::object(py::none());
              d["spearman"] = c.spearman ? py::object(py::float_(*c.spearman))
                                         : py::object(py::none());
              return d;
          },
          py::arg("x"), py::arg("y"),
          "Pearson and Spearman correlation of two series");

    m.def("minutes_for_frames", &minutes_for_frames, py::arg("frames"),
          py::arg("fps"), "Minutes to process a frame count at a throughput");
}
