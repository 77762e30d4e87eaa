#pragma once

// File formats. JSON is canonical; all numbers are binary64 written in the
// shortest form that reads back to the same bits.
//
//   frame        {"m", "n", "field": "real" | "complex", "columns": [[...], ...]}
//                complex scalars are [re, im] pairs
//   signal       {"m", "entries": [[re, im], ...]}
//   measurements {"values": [...], "noise_sigma": optional}
//   witness      {"x", "y", "target", "residual"}; x, y as signal entries,
//                target as the full m x m row list
//   certificate  {"verdict", "method", "det_value", "kernel_dim", "witness_file", "trials"}
//
// CSV is accepted for real frames only: m rows of n comma-separated values, no header.
// Files are written in place; concurrent writers to one path are not supported.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "cpr/certify.hpp"
#include "cpr/frames.hpp"
#include "cpr/lift.hpp"
#include "cpr/reconstruct.hpp"
#include "cpr/witness.hpp"

namespace cpr::io {

using Json = nlohmann::json;
using AnyFrame = std::variant<RealFrame, ComplexFrame>;

Json frame_to_json(const RealFrame& frame);
Json frame_to_json(const ComplexFrame& frame);
/// "field": "real" yields RealFrame, "complex" yields ComplexFrame.
AnyFrame frame_from_json(const Json& j);

Json signal_to_json(const ComplexSignal& x);
ComplexSignal signal_from_json(const Json& j);

Json measurements_to_json(const MeasurementVector& b);
/// Rejects negative values unless noise_sigma is present.
MeasurementVector measurements_from_json(const Json& j);

Json lift_to_json(const SymmetricLift& q);
SymmetricLift lift_from_json(const Json& j);

Json witness_to_json(const WitnessPair& w);
WitnessPair witness_from_json(const Json& j);

Json certificate_to_json(const Certificate& c, const std::optional<std::string>& witness_file);

struct CertificateRecord {
  std::string verdict;
  std::string method;
  std::optional<double> det_value;
  std::optional<std::size_t> kernel_dim;
  std::optional<std::string> witness_file;
  std::optional<SearchStats> trials;
};
CertificateRecord certificate_from_json(const Json& j);

Json search_stats_to_json(const SearchStats& s);
Json reconstruction_to_json(const ReconstructionResult& r);
Json strict_report_to_json(const StrictReport& r);

/// Parses CSV text into a real frame.
RealFrame frame_from_csv(const std::string& text);
std::string frame_to_csv(const RealFrame& frame);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

/// Loads a frame from .csv (real) or JSON by extension.
AnyFrame load_frame(const std::filesystem::path& path);

}  // namespace cpr::io
