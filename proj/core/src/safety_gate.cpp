#include "shiftgate/safety_gate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "shiftgate/errors.hpp"
#include "text_io.hpp"

namespace shiftgate {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(GatePolicy policy) noexcept {
  return policy == GatePolicy::kAllMetrics ? "all" : "any";
}

GatePolicy parse_gate_policy(std::string_view text) {
  if (text == "any" || text == "AnyMetric") return GatePolicy::kAnyMetric;
  if (text == "all" || text == "AllMetrics") return GatePolicy::kAllMetrics;
  throw Error(ErrorCode::kInvalidArgument, "unknown gate policy '" + std::string(text) + "'");
}

void SafetyThresholds::validate() const {
  if (!(hi_min >= 0.0 && hi_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "hi_min must lie in [0, 1]");
  }
  if (!(kl_max >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "kl_max must be >= 0");
  if (!(db_max >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "db_max must be >= 0");
  if (safe_shift < 0 || safe_shift > ShiftAmount::kMax) {
    throw Error(ErrorCode::kInvalidArgument, "safe_shift must lie in [0, 255]");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kNonPositiveEpsilon, "epsilon must be a positive finite number");
  }
}

SafetyThresholds calibrate(std::span<const Image> references, int safe_shift, ColorSpace space,
                           double epsilon) {
  if (references.empty()) {
    throw Error(ErrorCode::kEmptyReferenceSet, "calibration needs at least one reference image");
  }
  if (safe_shift < 0 || safe_shift > ShiftAmount::kMax) {
    throw Error(ErrorCode::kInvalidArgument, "safe shift must lie in [0, 255]");
  }

  SafetyThresholds out;
  out.hi_min = 1.0;
  out.kl_max = 0.0;
  out.db_max = 0.0;
  out.safe_shift = safe_shift;
  out.space = space;
  out.epsilon = epsilon;
  out.n_references = references.size();

  for (const Image& reference : references) {
    for (const int sign : {+1, -1}) {
      const Image shifted = shift_image(reference, ShiftAmount(sign * safe_shift));
      const DistanceReport r = distance_report(reference, shifted, space, epsilon);
      out.hi_min = std::min(out.hi_min, r.hi);
      out.kl_max = std::max(out.kl_max, r.kl);
      out.db_max = r.db ? std::max(out.db_max, *r.db) : std::numeric_limits<double>::infinity();
    }
  }
  out.calibrated_at = utc_timestamp();
  return out;
}

GateDecision decide(const SafetyThresholds& thresholds, const DistanceReport& measured,
                    GatePolicy policy) {
  GateDecision d;
  d.policy = policy;
  d.hi = {measured.hi, thresholds.hi_min, measured.hi > thresholds.hi_min};
  d.kl = {measured.kl, thresholds.kl_max, measured.kl < thresholds.kl_max};
  // An infinite distance can never be inside the limit.
  d.db = {measured.db, thresholds.db_max, measured.db && *measured.db < thresholds.db_max};
  d.safe = policy == GatePolicy::kAnyMetric ? (d.hi.pass || d.kl.pass || d.db.pass)
                                            : (d.hi.pass && d.kl.pass && d.db.pass);
  return d;
}

GateDecision gate(const SafetyThresholds& thresholds, const Image& reference, const Image& query,
                  GatePolicy policy) {
  return decide(thresholds,
                distance_report(reference, query, thresholds.space, thresholds.epsilon), policy);
}

StreamResult gate_stream(const SafetyThresholds& thresholds, const Image& reference,
                         std::span<const FrameSource> frames, GatePolicy policy) {
  thresholds.validate();
  StreamResult result;
  result.frames.reserve(frames.size());
  for (const FrameSource& source : frames) {
    FrameDecision fd;
    fd.frame = source.frame;
    try {
      fd.decision = gate(thresholds, reference, source.load(), policy);
    } catch (const std::exception& e) {
      fd.error = e.what();
    }
    if (!fd.safe() && !result.first_unsafe) result.first_unsafe = result.frames.size();
    result.frames.push_back(std::move(fd));
  }
  return result;
}

StreamResult gate_stream(const SafetyThresholds& thresholds, const Image& reference,
                         std::span<const Image> frames, GatePolicy policy) {
  std::vector<FrameSource> sources;
  sources.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    sources.push_back({static_cast<std::int64_t>(i), [&frames, i] { return frames[i]; }});
  }
  return gate_stream(thresholds, reference, std::span<const FrameSource>(sources), policy);
}

std::string to_json(const SafetyThresholds& t) {
  nlohmann::ordered_json j;
  j["hi_min"] = t.hi_min;
  j["kl_max"] = t.kl_max;
  j["db_max"] = std::isinf(t.db_max) ? nlohmann::ordered_json(nullptr)
                                     : nlohmann::ordered_json(t.db_max);
  j["safe_shift"] = t.safe_shift;
  j["space"] = to_string(t.space);
  j["epsilon"] = t.epsilon;
  j["calibrated_at"] = t.calibrated_at;
  j["n_references"] = t.n_references;
  return j.dump(2);
}

SafetyThresholds thresholds_from_json(std::string_view json) {
  SafetyThresholds t;
  try {
    const auto j = nlohmann::json::parse(json);
    t.hi_min = j.at("hi_min").get<double>();
    t.kl_max = j.at("kl_max").get<double>();
    t.db_max = j.at("db_max").is_null() ? std::numeric_limits<double>::infinity()
                                        : j.at("db_max").get<double>();
    t.safe_shift = j.at("safe_shift").get<int>();
    t.space = parse_color_space(j.at("space").get<std::string>());
    t.epsilon = j.at("epsilon").get<double>();
    t.calibrated_at = j.value("calibrated_at", std::string{});
    t.n_references = j.value("n_references", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("thresholds JSON: ") + e.what());
  }
  t.validate();
  return t;
}

void save_thresholds(const SafetyThresholds& thresholds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUnwritablePath, "cannot write " + path.string());
  out << to_json(thresholds) << '\n';
  if (!out) throw Error(ErrorCode::kUnwritablePath, "cannot write " + path.string());
}

SafetyThresholds load_thresholds(const std::filesystem::path& path) {
  return thresholds_from_json(detail::read_file(path));
}

void write_decisions_csv(std::ostream& out, const StreamResult& result, GatePolicy policy) {
  out << "frame,hi,kl,db,safe,policy\n";
  for (const auto& f : result.frames) {
    out << f.frame << ',';
    if (f.decision) {
      out << detail::format_double(*f.decision->hi.value) << ','
          << detail::format_double(*f.decision->kl.value) << ','
          << detail::format_optional(f.decision->db.value) << ',';
    } else {
      out << ",,,";
    }
    out << (f.safe() ? "true" : "false") << ',' << to_string(policy) << '\n';
  }
}

std::vector<DecisionRow> read_decisions_csv(std::istream& in) {
  detail::expect_header(in, "frame,hi,kl,db,safe,policy");
  std::vector<DecisionRow> rows;
  std::string line;
  const auto cell = [](std::string_view s) -> std::optional<double> {
    if (s.empty() || s == "inf") return std::nullopt;
    return detail::parse_double(s);
  };
  while (detail::next_line(in, line)) {
    const auto f = detail::split_fields(line);
    if (f.size() != 6 || (f[4] != "true" && f[4] != "false")) {
      throw Error(ErrorCode::kMalformedRecord, "decision row '" + line + "'");
    }
    DecisionRow row;
    row.frame = detail::parse_int(f[0]);
    row.hi = cell(f[1]);
    row.kl = cell(f[2]);
    row.db = cell(f[3]);
    row.db_infinite = f[3] == "inf";
    row.safe = f[4] == "true";
    row.policy = parse_gate_policy(f[5]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace shiftgate
