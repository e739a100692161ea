#include "seldec/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "seldec/errors.hpp"
#include "seldec/format.hpp"

namespace seldec::io {

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw InputError("matrix row " + std::to_string(r) + " must have " + std::to_string(n) +
                       " entries");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
        throw InputError("matrix entry (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") must be a [re, im] pair");
      m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

namespace {

SystemConfig parse_system_config(const json& j, double tol) {
  if (!j.is_object()) throw InputError("system config must be a JSON object");
  for (const char* key : {"dim", "flip_set", "hamiltonian"})
    if (!j.contains(key)) throw InputError(std::string("system config is missing \"") + key + "\"");

  const auto dim = j.at("dim").get<std::size_t>();
  auto flip = j.at("flip_set").get<std::vector<std::size_t>>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();

  LevelSystem system(dim, std::move(flip), std::move(labels));
  ComplexMatrix h = matrix_from_json(j.at("hamiltonian"));
  if (static_cast<std::size_t>(h.rows()) != dim)
    throw DimensionError("hamiltonian is " + std::to_string(h.rows()) + "x" +
                         std::to_string(h.rows()) + " but dim is " + std::to_string(dim));
  require_hermitian(h, tol);
  return {std::move(system), std::move(h)};
}

}  // namespace

SystemConfig system_config_from_json(const json& j, double tol) {
  try {
    return parse_system_config(j, tol);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed system config: ") + e.what());
  }
}

json system_config_to_json(const SystemConfig& config) {
  return {{"dim", config.system.dim()},
          {"labels", config.system.labels()},
          {"flip_set", config.system.flip_set()},
          {"hamiltonian", matrix_to_json(config.hamiltonian)}};
}

json sequence_to_json(const PulseSequence& seq) {
  return {{"n", seq.pulse_count()}, {"deltas", seq.deltas()}};
}

PulseSequence sequence_from_json(const json& j) try {
  if (!j.is_object() || !j.contains("deltas")) throw InputError("sequence must have \"deltas\"");
  auto deltas = j.at("deltas").get<std::vector<double>>();
  if (j.contains("n") && j.at("n").get<std::size_t>() + 1 != deltas.size())
    throw InputError("sequence \"n\" does not match the number of deltas minus one");
  return PulseSequence(std::move(deltas));
} catch (const json::exception& e) {
  throw InputError(std::string("malformed sequence: ") + e.what());
}

json evaluation_to_json(const EvaluationReport& report) {
  json out = {{"tf", report.total_time},
              {"unwanted_residual", report.metrics.unwanted_residual},
              {"wanted_deviation", report.metrics.wanted_deviation},
              {"U", matrix_to_json(report.propagator)},
              {"H_eff", matrix_to_json(report.effective)}};
  if (report.metrics.preserved_coupling_deviation)
    out["preserved_coupling_deviation"] = *report.metrics.preserved_coupling_deviation;
  return out;
}

json scaling_fit_to_json(const ScalingFit& fit) {
  return {{"slope_unwanted", fit.slope_unwanted},
          {"slope_wanted", fit.slope_wanted},
          {"excluded", fit.noise_floor_points_excluded}};
}

void write_scaling_csv(std::ostream& os, const ScalingFit& fit) {
  os << "tf,unwanted_residual,wanted_deviation\n";
  for (const auto& p : fit.grid)
    os << format_double(p.total_time) << ',' << format_double(p.unwanted_residual) << ','
       << format_double(p.wanted_deviation) << '\n';
}

namespace {

void dump_value(std::ostringstream& os, const json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        dump_value(os, it.value(), depth + 1);
      }
      os << '\n' << pad << '}';
      return;
    }
    case json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& v) {
        return v.is_object() || (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& w) {
                                   return w.is_structured();
                                 }));
      });
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << '\n' << inner;
        first = false;
        dump_value(os, v, depth + 1);
      }
      if (!flat && !j.empty()) os << '\n' << pad;
      os << ']';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump(const json& j) {
  std::ostringstream os;
  dump_value(os, j, 0);
  os << '\n';
  return os.str();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw InputError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace seldec::io
