#include "csg2l/harness/metrics_io.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "csg2l/errors.hpp"

namespace csg {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SummaryRow summary_row(const MultiRunResult& r, bool is_default) {
  SummaryRow s;
  s.dataset = r.config.dataset;
  s.encoder = std::string(to_string(r.config.model.encoder.kind));
  s.mode = std::string(to_string(r.config.mode));
  s.lambda = r.config.mode == TrainMode::baseline ? 0.0 : r.config.lambda;
  s.weight_decay = r.weight_decay;
  s.mean = r.summary.mean;
  s.std = r.summary.std;
  s.runs = r.summary.runs;
  s.failed = r.summary.failed;
  s.complete = r.summary.complete();
  s.is_default = is_default;
  return s;
}

void write_runs_csv(const std::filesystem::path& path, const std::vector<RunMetrics>& runs) {
  auto out = open_out(path);
  out << kRunsCsvHeader << '\n';
  for (const auto& r : runs) {
    out << r.dataset << ',' << to_string(r.encoder) << ',' << to_string(r.mode) << ','
        << format_double(r.lambda) << ',' << format_double(r.weight_decay) << ',' << r.seed << ','
        << r.split << ',' << r.best_epoch << ',' << format_double(r.val_acc) << ','
        << format_double(r.test_acc) << ',' << (r.failed ? "failed" : "ok") << ','
        << format_double(r.wall_ms) << '\n';
  }
  finish(out, path);
}

void write_epochs_csv(const std::filesystem::path& path, const std::vector<RunMetrics>& runs) {
  auto out = open_out(path);
  out << "dataset,encoder,mode,lambda,split,epoch,train_loss,ce_loss,cl_loss,confident,val_acc,"
         "test_acc\n";
  for (const auto& r : runs) {
    for (const auto& e : r.epochs) {
      out << r.dataset << ',' << to_string(r.encoder) << ',' << to_string(r.mode) << ','
          << format_double(r.lambda) << ',' << r.split << ',' << e.epoch << ','
          << format_double(e.train_loss) << ',' << format_double(e.ce_loss) << ','
          << format_double(e.cl_loss) << ',' << e.confident << ',' << format_double(e.val_acc)
          << ',' << format_double(e.test_acc) << '\n';
    }
  }
  finish(out, path);
}

void write_summary_json(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : rows) {
    nlohmann::ordered_json j;
    j["dataset"] = s.dataset;
    j["encoder"] = s.encoder;
    j["mode"] = s.mode;
    j["lambda"] = s.lambda;
    j["weight_decay"] = s.weight_decay;
    j["mean"] = s.mean;
    j["std"] = s.std;
    j["runs"] = s.runs;
    j["failed"] = s.failed;
    j["complete"] = s.complete;
    j["default"] = s.is_default;
    arr.push_back(std::move(j));
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
  finish(out, path);
}

std::vector<SummaryRow> read_summary_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<SummaryRow> rows;
  try {
    const auto arr = nlohmann::json::parse(in);
    for (const auto& j : arr) {
      SummaryRow s;
      s.dataset = j.at("dataset").get<std::string>();
      s.encoder = j.at("encoder").get<std::string>();
      s.mode = j.at("mode").get<std::string>();
      s.lambda = j.at("lambda").get<double>();
      s.weight_decay = j.at("weight_decay").get<double>();
      s.mean = j.at("mean").get<double>();
      s.std = j.at("std").get<double>();
      s.runs = j.at("runs").get<std::size_t>();
      s.failed = j.at("failed").get<std::size_t>();
      s.complete = j.at("complete").get<bool>();
      s.is_default = j.at("default").get<bool>();
      rows.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return rows;
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points) {
  auto out = open_out(path);
  out << "lambda,mean,std,runs,failed,default\n";
  for (const auto& p : points) {
    const auto& a = p.result.summary;
    out << format_double(p.lambda) << ',' << format_double(a.mean) << ',' << format_double(a.std)
        << ',' << a.runs << ',' << a.failed << ',' << (p.is_default ? "yes" : "no") << '\n';
  }
  finish(out, path);
}

std::string runs_csv_key(const std::string& row) {
  const auto pos = row.rfind(',');
  return pos == std::string::npos ? row : row.substr(0, pos);
}

}  // namespace csg
