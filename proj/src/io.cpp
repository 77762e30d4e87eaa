#include "cpr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cpr/error.hpp"

namespace cpr::io {
namespace {

[[noreturn]] void malformed(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::MalformedFile, field + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) malformed(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) malformed(where + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  // nlohmann writes non-finite doubles as null
  if (j.is_null()) throw Error(ErrorCode::NonFinite, field + ": value is not finite");
  if (!j.is_number()) malformed(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, field + ": value is not finite");
  return v;
}

std::size_t count(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    malformed(field, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const std::string& field) {
  if (!j.is_array()) malformed(field, "expected an array");
  return j;
}

Complex complex_pair(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) malformed(field, "expected a [re, im] pair");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

Json pair(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

// Frames

Json frame_to_json(const RealFrame& frame) {
  Json cols = Json::array();
  for (std::size_t k = 0; k < frame.n(); ++k) cols.push_back(frame.column(k));
  return Json{{"m", frame.m()}, {"n", frame.n()}, {"field", "real"}, {"columns", cols}};
}

Json frame_to_json(const ComplexFrame& frame) {
  Json cols = Json::array();
  for (std::size_t k = 0; k < frame.n(); ++k) {
    Json col = Json::array();
    for (std::size_t j = 0; j < frame.m(); ++j) col.push_back(pair(frame(j, k)));
    cols.push_back(col);
  }
  return Json{{"m", frame.m()}, {"n", frame.n()}, {"field", "complex"}, {"columns", cols}};
}

AnyFrame frame_from_json(const Json& j) {
  const std::size_t m = count(member(j, "m", "frame"), "frame.m");
  const std::size_t n = count(member(j, "n", "frame"), "frame.n");
  const Json& field = member(j, "field", "frame");
  if (!field.is_string()) malformed("frame.field", "expected \"real\" or \"complex\"");
  const std::string kind = field.get<std::string>();
  if (kind != "real" && kind != "complex") malformed("frame.field", "expected \"real\" or \"complex\"");
  const Json& cols = array(member(j, "columns", "frame"), "frame.columns");
  if (cols.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "frame.columns: has " + std::to_string(cols.size()) +
                                                  " vectors but n = " + std::to_string(n));
  }
  if (m == 0) malformed("frame.m", "must be >= 1");
  if (kind == "real") {
    RowMatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const std::string where = at("frame.columns", k);
      const Json& col = array(cols[k], where);
      if (col.size() != m) {
        throw Error(ErrorCode::DimensionMismatch,
                    where + ": has " + std::to_string(col.size()) + " entries but m = " + std::to_string(m));
      }
      for (std::size_t r = 0; r < m; ++r)
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = number(col[r], at(where, r));
    }
    return RealFrame(std::move(a));
  }
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::string where = at("frame.columns", k);
    const Json& col = array(cols[k], where);
    if (col.size() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  where + ": has " + std::to_string(col.size()) + " entries but m = " + std::to_string(m));
    }
    for (std::size_t r = 0; r < m; ++r)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = complex_pair(col[r], at(where, r));
  }
  return ComplexFrame(std::move(a));
}

// Signals and measurements

Json signal_to_json(const ComplexSignal& x) {
  Json e = Json::array();
  for (const Complex& z : x.entries()) e.push_back(pair(z));
  return Json{{"m", x.m()}, {"entries", e}};
}

ComplexSignal signal_from_json(const Json& j) {
  const std::size_t m = count(member(j, "m", "signal"), "signal.m");
  const Json& e = array(member(j, "entries", "signal"), "signal.entries");
  if (e.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "signal.entries: has " + std::to_string(e.size()) +
                                                  " entries but m = " + std::to_string(m));
  }
  std::vector<Complex> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = complex_pair(e[i], at("signal.entries", i));
  return ComplexSignal(std::move(v));
}

Json measurements_to_json(const MeasurementVector& b) {
  Json j{{"values", b.values}};
  if (b.noise_sigma) j["noise_sigma"] = *b.noise_sigma;
  return j;
}

MeasurementVector measurements_from_json(const Json& j) {
  const Json& vals = array(member(j, "values", "measurements"), "measurements.values");
  MeasurementVector b;
  if (const auto it = j.find("noise_sigma"); it != j.end() && !it->is_null()) {
    const double sigma = number(*it, "measurements.noise_sigma");
    if (sigma < 0.0) malformed("measurements.noise_sigma", "must be >= 0");
    b.noise_sigma = sigma;
  }
  b.values.resize(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    b.values[i] = number(vals[i], at("measurements.values", i));
    if (b.values[i] < 0.0 && !b.noise_sigma) {
      throw Error(ErrorCode::InvalidArgument,
                  at("measurements.values", i) + ": negative value in noiseless measurements");
    }
  }
  return b;
}

// Lifts and witnesses

Json lift_to_json(const SymmetricLift& q) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < q.m(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < q.m(); ++k) row.push_back(q(i, k));
    rows.push_back(row);
  }
  return rows;
}

SymmetricLift lift_from_json(const Json& j) {
  const Json& rows = array(j, "matrix");
  const std::size_t m = rows.size();
  if (m == 0) malformed("matrix", "empty");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Json& row = array(rows[i], at("matrix", i));
    if (row.size() != m) {
      throw Error(ErrorCode::DimensionMismatch, at("matrix", i) + ": matrix is not square");
    }
    for (std::size_t k = 0; k < m; ++k)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number(row[k], at(at("matrix", i), k));
  }
  if (a != a.transpose()) malformed("matrix", "not exactly symmetric");
  return SymmetricLift::from_upper(a);
}

Json witness_to_json(const WitnessPair& w) {
  return Json{{"x", signal_to_json(w.x)},
              {"y", signal_to_json(w.y)},
              {"target", lift_to_json(w.target)},
              {"residual", w.residual}};
}

WitnessPair witness_from_json(const Json& j) {
  ComplexSignal x = signal_from_json(member(j, "x", "witness"));
  ComplexSignal y = signal_from_json(member(j, "y", "witness"));
  SymmetricLift target = lift_from_json(member(j, "target", "witness"));
  const double res = number(member(j, "residual", "witness"), "witness.residual");
  if (x.m() != y.m() || x.m() != target.m()) {
    throw Error(ErrorCode::DimensionMismatch, "witness: x, y and target dimensions differ");
  }
  return WitnessPair{std::move(x), std::move(y), std::move(target), res};
}

// Reports

Json search_stats_to_json(const SearchStats& s) {
  return Json{{"budget", s.budget},
              {"restarts", s.restarts},
              {"seed", s.seed},
              {"best_objective", s.best_objective}};
}

Json certificate_to_json(const Certificate& c, const std::optional<std::string>& witness_file) {
  Json j{{"verdict", to_string(c.verdict)}, {"method", to_string(c.method)}};
  j["det_value"] = c.det_value ? Json(*c.det_value) : Json(nullptr);
  j["kernel_dim"] = c.kernel_dim ? Json(*c.kernel_dim) : Json(nullptr);
  j["witness_file"] = witness_file ? Json(*witness_file) : Json(nullptr);
  j["trials"] = c.trials ? search_stats_to_json(*c.trials) : Json(nullptr);
  if (c.violating_set) j["violating_set"] = *c.violating_set;
  return j;
}

CertificateRecord certificate_from_json(const Json& j) {
  CertificateRecord r;
  const Json& verdict = member(j, "verdict", "certificate");
  const Json& method = member(j, "method", "certificate");
  if (!verdict.is_string()) malformed("certificate.verdict", "expected a string");
  if (!method.is_string()) malformed("certificate.method", "expected a string");
  r.verdict = verdict.get<std::string>();
  r.method = method.get<std::string>();
  if (const Json& d = member(j, "det_value", "certificate"); !d.is_null())
    r.det_value = number(d, "certificate.det_value");
  if (const Json& k = member(j, "kernel_dim", "certificate"); !k.is_null())
    r.kernel_dim = count(k, "certificate.kernel_dim");
  if (const Json& w = member(j, "witness_file", "certificate"); !w.is_null()) {
    if (!w.is_string()) malformed("certificate.witness_file", "expected a string");
    r.witness_file = w.get<std::string>();
  }
  if (const Json& t = member(j, "trials", "certificate"); !t.is_null()) {
    SearchStats s;
    s.budget = count(member(t, "budget", "certificate.trials"), "certificate.trials.budget");
    s.restarts = count(member(t, "restarts", "certificate.trials"), "certificate.trials.restarts");
    s.seed = member(t, "seed", "certificate.trials").get<std::uint64_t>();
    const Json& best = member(t, "best_objective", "certificate.trials");
    s.best_objective = best.is_null() ? std::numeric_limits<double>::infinity()
                                      : number(best, "certificate.trials.best_objective");
    r.trials = s;
  }
  return r;
}

Json reconstruction_to_json(const ReconstructionResult& r) {
  return Json{{"estimate", signal_to_json(r.estimate)},
              {"lift_residual", r.lift_residual},
              {"rank_excess", r.rank_excess},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

Json strict_report_to_json(const StrictReport& r) {
  return Json{{"verdict", to_string(r.verdict)},
              {"witness_y", r.witness_y ? signal_to_json(*r.witness_y) : Json(nullptr)},
              {"im_gram_nullity", r.im_gram_nullity},
              {"max_residual", r.max_residual}};
}

// CSV

RealFrame frame_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      const std::string field = "csv line " + std::to_string(line_no) + " column " + std::to_string(row.size() + 1);
      if (first == std::string::npos) malformed(field, "empty cell");
      cell = cell.substr(first, last - first + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) malformed(field, "not a number: " + cell);
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, field + ": value is not finite");
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "csv line " + std::to_string(line_no) + ": has " + std::to_string(row.size()) +
                      " columns, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) malformed("csv", "no rows");
  RowMatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return RealFrame(std::move(a));
}

std::string frame_to_csv(const RealFrame& frame) {
  std::string out;
  char buf[64];
  for (std::size_t j = 0; j < frame.m(); ++j) {
    for (std::size_t k = 0; k < frame.n(); ++k) {
      if (k > 0) out += ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), frame(j, k));
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

// Files

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedFile, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

AnyFrame load_frame(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return frame_from_csv(read_text(path));
  return frame_from_json(read_json(path));
}

}  // namespace cpr::io
