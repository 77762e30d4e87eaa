#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpr/certify.hpp"
#include "cpr/error.hpp"
#include "cpr/frames.hpp"
#include "cpr/io.hpp"
#include "cpr/lift.hpp"
#include "cpr/reconstruct.hpp"
#include "cpr/witness.hpp"

namespace fs = std::filesystem;
using cpr::io::Json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string complex_text(cpr::Complex z) {
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  auto imag_part = [](double v) {
    if (v == 1.0) return std::string("i");
    if (v == -1.0) return std::string("-i");
    return num(v) + "i";
  };
  if (im == 0.0) return num(re);
  if (re == 0.0) return imag_part(im);
  std::string s = num(re);
  if (im > 0.0) s += "+";
  return s + imag_part(im);
}

std::string signal_text(const cpr::ComplexSignal& x) {
  std::string s = "(";
  for (std::size_t j = 0; j < x.m(); ++j) {
    if (j > 0) s += ", ";
    s += complex_text(x[j]);
  }
  return s + ")";
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw cpr::Error(cpr::ErrorCode::InvalidArgument, flag + ": not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw cpr::Error(cpr::ErrorCode::InvalidArgument,
                     flag + " expects " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

cpr::RealFrame require_real(const cpr::io::AnyFrame& any, const std::string& command) {
  if (const auto* real = std::get_if<cpr::RealFrame>(&any)) return *real;
  const auto& complex = std::get<cpr::ComplexFrame>(any);
  if (complex.is_real()) return complex.to_real();
  throw cpr::Error(cpr::ErrorCode::NotRealFrame,
                   command + " needs a real frame; use `cpr strict` for complex frames");
}

cpr::ComplexFrame as_complex(const cpr::io::AnyFrame& any) {
  if (const auto* real = std::get_if<cpr::RealFrame>(&any)) return cpr::ComplexFrame(*real);
  return std::get<cpr::ComplexFrame>(any);
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

// Writes `j` to `out` when given, otherwise prints it.
void deliver(const Json& j, const std::optional<std::string>& out) {
  if (out) {
    cpr::io::write_json(*out, j);
  } else {
    emit(j);
  }
}

Json path_or_null(const std::optional<std::string>& p) { return p ? Json(*p) : Json(nullptr); }

struct Common {
  bool json = false;
};

// gen

struct GenArgs {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool cone = false;
  std::optional<std::string> out;
};

void run_gen(const GenArgs& a, const Common& c) {
  if (a.m == 0) throw cpr::Error(cpr::ErrorCode::InvalidArgument, "--m must be >= 1");
  if (a.n < a.m) {
    throw cpr::Error(cpr::ErrorCode::InvalidArgument,
                     "--n " + std::to_string(a.n) + " is below --m " + std::to_string(a.m) +
                         "; a frame needs at least m vectors");
  }
  if (a.cone && a.m != 3) throw cpr::Error(cpr::ErrorCode::InvalidArgument, "--cone frames live in dimension 3");
  const cpr::RealFrame frame = a.cone ? cpr::cone_frame(a.n) : cpr::random_frame(a.m, a.n, a.seed);
  const std::size_t generic = cpr::generic_cpr_size(a.m);
  const bool below = a.n < generic;
  const Json fj = cpr::io::frame_to_json(frame);
  if (a.out) cpr::io::write_json(*a.out, fj);

  if (c.json) {
    Json j{{"m", a.m}, {"n", a.n}, {"kind", a.cone ? "cone" : "gaussian"}, {"seed", a.seed},
           {"output", path_or_null(a.out)}, {"generic_cpr_size", generic}, {"below_generic_size", below}};
    if (!a.out) j["frame"] = fj;
    emit(j);
    return;
  }
  std::ostream& info = a.out ? std::cout : std::cerr;
  if (a.out) {
    std::cout << "wrote " << a.m << "x" << a.n << (a.cone ? " cone" : " gaussian") << " frame to " << *a.out
              << "\n";
  } else {
    emit(fj);
  }
  if (below) {
    info << "note: n = " << a.n << " is below " << generic << ", the size at which generic real frames on C^"
         << a.m << " are conjugate phase retrievable\n";
  }
}

// certify

struct CertifyArgs {
  std::string frame;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
};

std::string witness_path_for(const std::string& frame) {
  const fs::path p(frame);
  return (p.parent_path() / (p.stem().string() + ".witness.json")).string();
}

void run_certify(const CertifyArgs& a, const Common& c) {
  const cpr::RealFrame frame = require_real(cpr::io::load_frame(a.frame), "certify");
  cpr::CertifyOptions opt;
  opt.search_budget = a.budget;
  opt.seed = a.seed;
  const cpr::Certificate cert = cpr::certify(frame, opt);

  std::optional<std::string> witness_file;
  if (cert.verdict == cpr::Verdict::NotCPR && cert.witness) {
    witness_file = witness_path_for(a.frame);
    cpr::io::write_json(*witness_file, cpr::io::witness_to_json(*cert.witness));
  }
  if (c.json) {
    Json j = cpr::io::certificate_to_json(cert, witness_file);
    j["m"] = frame.m();
    j["n"] = frame.n();
    emit(j);
    return;
  }
  std::cout << cpr::to_string(cert.verdict) << " (" << cpr::to_string(cert.method) << ")\n";
  std::cout << "frame: " << frame.m() << "x" << frame.n() << "\n";
  if (cert.det_value) std::cout << "det: " << num(*cert.det_value) << "\n";
  if (cert.kernel_dim) std::cout << "kernel dimension: " << *cert.kernel_dim << "\n";
  if (cert.violating_set) {
    std::cout << "complement property fails on I = {";
    for (std::size_t i = 0; i < cert.violating_set->size(); ++i)
      std::cout << (i ? ", " : "") << (*cert.violating_set)[i];
    std::cout << "}\n";
  }
  if (cert.trials) {
    std::cout << "search: " << cert.trials->restarts << " of " << cert.trials->budget << " restarts, seed "
              << cert.trials->seed << ", best objective " << num(cert.trials->best_objective) << "\n";
  }
  if (witness_file) {
    std::cout << "witness x = " << signal_text(cert.witness->x) << "\n";
    std::cout << "witness y = " << signal_text(cert.witness->y) << "\n";
    std::cout << "witness written to " << *witness_file << "\n";
  }
}

// measure

struct MeasureArgs {
  std::string frame;
  std::string signal;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

void run_measure(const MeasureArgs& a, const Common& c) {
  const cpr::io::AnyFrame any = cpr::io::load_frame(a.frame);
  const cpr::ComplexSignal x = cpr::io::signal_from_json(cpr::io::read_json(a.signal));
  std::optional<cpr::NoiseOptions> noise;
  if (a.sigma) {
    if (!(*a.sigma >= 0.0)) throw cpr::Error(cpr::ErrorCode::InvalidArgument, "--noise-sigma must be >= 0");
    noise = cpr::NoiseOptions{*a.sigma, a.seed};
  }
  const cpr::MeasurementVector b = std::visit([&](const auto& f) { return cpr::measure(f, x, noise); }, any);
  const Json bj = cpr::io::measurements_to_json(b);
  if (c.json) {
    if (a.out) cpr::io::write_json(*a.out, bj);
    emit(Json{{"output", path_or_null(a.out)}, {"measurements", bj}});
    return;
  }
  deliver(bj, a.out);
  if (a.out) std::cout << "wrote " << b.values.size() << " measurements to " << *a.out << "\n";
}

// reconstruct

struct ReconstructArgs {
  std::string frame;
  std::string meas;
  std::string method = "linear";
  std::size_t restarts = 50;
  std::size_t max_iter = 500;
  std::uint64_t seed = 0;
  bool strict = false;
  std::optional<std::string> out;
};

int run_reconstruct(const ReconstructArgs& a, const Common& c) {
  const cpr::RealFrame frame = require_real(cpr::io::load_frame(a.frame), "reconstruct");
  const cpr::MeasurementVector b = cpr::io::measurements_from_json(cpr::io::read_json(a.meas));
  if (b.values.size() != frame.n()) {
    throw cpr::Error(cpr::ErrorCode::DimensionMismatch,
                     a.meas + " holds " + std::to_string(b.values.size()) + " measurements but the frame has " +
                         std::to_string(frame.n()) + " vectors");
  }
  cpr::AltProjOptions opt;
  opt.restarts = a.restarts;
  opt.max_iter = a.max_iter;
  opt.seed = a.seed;
  const cpr::ReconstructionResult r =
      a.method == "linear" ? cpr::reconstruct_linear(frame, b) : cpr::reconstruct_altproj(frame, b, opt);
  const Json sj = cpr::io::signal_to_json(r.estimate);
  if (a.out) cpr::io::write_json(*a.out, sj);
  const bool failed = a.strict && !r.converged;

  if (c.json) {
    Json j = cpr::io::reconstruction_to_json(r);
    j["method"] = a.method;
    j["output"] = path_or_null(a.out);
    if (failed) j["error"] = "NotConverged";
    emit(j);
  } else {
    std::cout << "estimate: " << signal_text(r.estimate) << "\n";
    std::cout << "lift_residual: " << num(r.lift_residual) << "\n";
    std::cout << "rank_excess: " << num(r.rank_excess) << "\n";
    std::cout << "converged: " << (r.converged ? "true" : "false") << "\n";
    if (a.method == "altproj") std::cout << "iterations: " << r.iterations << "\n";
    if (a.out) std::cout << "wrote estimate to " << *a.out << "\n";
  }
  if (failed) {
    std::cerr << "cpr: reconstruction did not converge\n";
    return kExitNumerical;
  }
  return 0;
}

// falsify

struct FalsifyArgs {
  std::string frame;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

void run_falsify(const FalsifyArgs& a, const Common& c) {
  const cpr::RealFrame frame = require_real(cpr::io::load_frame(a.frame), "falsify");
  cpr::SearchOptions opt;
  opt.budget = a.budget;
  opt.seed = a.seed;
  const cpr::SearchResult res = cpr::falsify_search(frame, opt);
  if (res.witness && a.out) cpr::io::write_json(*a.out, cpr::io::witness_to_json(*res.witness));

  if (c.json) {
    Json j{{"found", res.witness.has_value()}, {"trials", cpr::io::search_stats_to_json(res.stats)}};
    if (res.witness) {
      j["witness"] = cpr::io::witness_to_json(*res.witness);
      j["gap"] = cpr::witness_gap(frame, *res.witness);
      j["distance"] = cpr::conj_class_distance(res.witness->x, res.witness->y);
    }
    j["output"] = res.witness ? path_or_null(a.out) : Json(nullptr);
    emit(j);
    return;
  }
  if (!res.witness) {
    std::cout << "no witness found in " << res.stats.restarts << " restarts (best objective "
              << num(res.stats.best_objective) << ")\n";
    return;
  }
  std::cout << "witness found after " << res.stats.restarts << " restarts\n";
  std::cout << "x = " << signal_text(res.witness->x) << "\n";
  std::cout << "y = " << signal_text(res.witness->y) << "\n";
  std::cout << "gap: " << num(cpr::witness_gap(frame, *res.witness))
            << ", distance: " << num(cpr::conj_class_distance(res.witness->x, res.witness->y)) << "\n";
  if (a.out) std::cout << "wrote witness to " << *a.out << "\n";
}

// witness

struct WitnessArgs {
  std::optional<std::string> diag;
  std::optional<std::string> diag2;
  std::optional<std::string> matrix;
  std::optional<std::string> out;
};

cpr::SymmetricLift read_target(const std::string& path) {
  const Json j = cpr::io::read_json(path);
  if (j.is_object()) {
    if (const auto it = j.find("matrix"); it != j.end()) return cpr::io::lift_from_json(*it);
    if (const auto it = j.find("target"); it != j.end()) return cpr::io::lift_from_json(*it);
  }
  return cpr::io::lift_from_json(j);
}

void run_witness(const WitnessArgs& a, const Common& c) {
  const int chosen = (a.diag ? 1 : 0) + (a.diag2 ? 1 : 0) + (a.matrix ? 1 : 0);
  if (chosen != 1) {
    throw cpr::Error(cpr::ErrorCode::InvalidArgument, "give exactly one of --diag, --diag2, --matrix");
  }
  std::optional<cpr::WitnessPair> w;
  if (a.diag) {
    const auto v = parse_list(*a.diag, 3, "--diag");
    w = v[1] == 0.0 ? cpr::witness_diag_m3_degenerate(v[0], v[2]) : cpr::witness_diag_m3(v[0], v[1], v[2]);
  } else if (a.diag2) {
    const auto v = parse_list(*a.diag2, 2, "--diag2");
    w = cpr::witness_diag_m2(v[0], v[1]);
  } else {
    w = cpr::witness_general(read_target(*a.matrix));
  }
  const Json wj = cpr::io::witness_to_json(*w);
  if (c.json) {
    if (a.out) cpr::io::write_json(*a.out, wj);
    Json j{{"output", path_or_null(a.out)}, {"witness", wj},
           {"distance", cpr::conj_class_distance(w->x, w->y)}};
    emit(j);
    return;
  }
  if (!a.out) {
    emit(wj);
    return;
  }
  cpr::io::write_json(*a.out, wj);
  std::cout << "x = " << signal_text(w->x) << "\n";
  std::cout << "y = " << signal_text(w->y) << "\n";
  std::cout << "residual: " << num(w->residual) << "\n";
  std::cout << "wrote witness to " << *a.out << "\n";
}

// strict

struct StrictArgs {
  std::string frame;
  std::uint64_t seed = 0;
};

void run_strict(const StrictArgs& a, const Common& c) {
  const cpr::ComplexFrame frame = as_complex(cpr::io::load_frame(a.frame));
  cpr::StrictOptions opt;
  opt.seed = a.seed;
  const cpr::StrictReport r = cpr::strict_report(frame, opt);
  if (c.json) {
    emit(cpr::io::strict_report_to_json(r));
    return;
  }
  std::cout << cpr::to_string(r.verdict);
  if (r.witness_y) std::cout << "; witness y = " << signal_text(*r.witness_y);
  std::cout << "\n";
  std::cout << "im-gram nullity: " << r.im_gram_nullity << "\n";
  if (r.witness_y) std::cout << "max residual: " << num(r.max_residual) << "\n";
}

int fail(const std::string& code, const std::string& message, bool json, int status) {
  std::cerr << "cpr: " << message << "\n";
  if (json) emit(Json{{"error", code}, {"message", message}});
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugate phase retrieval toolkit for real and complex frames"};
  app.require_subcommand(1);
  Common common;
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", common.json, "Print one JSON document"); };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a Gaussian or cone frame");
  gen_cmd->add_option("--m", gen.m, "Signal dimension")->required();
  gen_cmd->add_option("--n", gen.n, "Number of frame vectors")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_flag("--cone", gen.cone, "Vectors (cos t, sin t, 1) on the light cone");
  gen_cmd->add_option("-o,--output", gen.out, "Frame file");
  add_json(gen_cmd);

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Decide conjugate phase retrievability of a real frame");
  cert_cmd->add_option("frame", cert.frame, "Frame file (.json or .csv)")->required();
  cert_cmd->add_option("--budget", cert.budget, "Search restarts for undecided frames (0 disables)");
  cert_cmd->add_option("--seed", cert.seed, "Search seed");
  add_json(cert_cmd);

  MeasureArgs meas;
  auto* meas_cmd = app.add_subcommand("measure", "Compute |<x, phi_n>|^2");
  meas_cmd->add_option("frame", meas.frame, "Frame file")->required();
  meas_cmd->add_option("signal", meas.signal, "Signal file")->required();
  meas_cmd->add_option("--noise-sigma", meas.sigma, "Gaussian noise level relative to the mean measurement");
  meas_cmd->add_option("--seed", meas.seed, "Noise seed");
  meas_cmd->add_option("-o,--output", meas.out, "Measurement file");
  add_json(meas_cmd);

  ReconstructArgs rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Recover a signal from measurements");
  rec_cmd->add_option("frame", rec.frame, "Frame file")->required();
  rec_cmd->add_option("meas", rec.meas, "Measurement file")->required();
  rec_cmd->add_option("--method", rec.method, "linear or altproj")
      ->check(CLI::IsMember({"linear", "altproj"}));
  rec_cmd->add_option("--restarts", rec.restarts, "altproj restarts");
  rec_cmd->add_option("--max-iter", rec.max_iter, "altproj iterations per restart");
  rec_cmd->add_option("--seed", rec.seed, "altproj seed");
  rec_cmd->add_flag("--strict", rec.strict, "Exit 3 when altproj does not converge");
  rec_cmd->add_option("-o,--output", rec.out, "Signal file");
  add_json(rec_cmd);

  FalsifyArgs fal;
  auto* fal_cmd = app.add_subcommand("falsify", "Search for a pair of signals the frame cannot tell apart");
  fal_cmd->add_option("frame", fal.frame, "Frame file")->required();
  fal_cmd->add_option("--budget", fal.budget, "Restarts");
  fal_cmd->add_option("--seed", fal.seed, "Seed");
  fal_cmd->add_option("-o,--output", fal.out, "Witness file");
  add_json(fal_cmd);

  WitnessArgs wit;
  auto* wit_cmd = app.add_subcommand("witness", "Build x, y with Re(xx* - yy*) equal to a target");
  wit_cmd->add_option("--diag", wit.diag, "a,b,c for diag(a, b, -c)");
  wit_cmd->add_option("--diag2", wit.diag2, "a,c for diag(a, -c)");
  wit_cmd->add_option("--matrix", wit.matrix, "JSON file with a symmetric 2x2 or 3x3 matrix");
  wit_cmd->add_option("-o,--output", wit.out, "Witness file");
  add_json(wit_cmd);

  StrictArgs str;
  auto* str_cmd = app.add_subcommand("strict", "Check whether the frame is blind to conjugation");
  str_cmd->add_option("frame", str.frame, "Frame file")->required();
  str_cmd->add_option("--seed", str.seed, "Seed for m >= 4");
  add_json(str_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) run_gen(gen, common);
    if (*cert_cmd) run_certify(cert, common);
    if (*meas_cmd) run_measure(meas, common);
    if (*rec_cmd) return run_reconstruct(rec, common);
    if (*fal_cmd) run_falsify(fal, common);
    if (*wit_cmd) run_witness(wit, common);
    if (*str_cmd) run_strict(str, common);
  } catch (const cpr::Error& e) {
    return fail(std::string(cpr::to_string(e.code())), e.what(), common.json,
                cpr::is_numerical(e.code()) ? kExitNumerical : kExitUsage);
  } catch (const std::exception& e) {
    return fail("Internal", e.what(), common.json, kExitNumerical);
  }
  return 0;
}
