#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camtamper/detectors.hpp"
#include "camtamper/synth.hpp"

namespace camtamper::eval {

constexpr std::int64_t kDefaultMatchWindow = 50;

struct KindCounts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  friend bool operator==(const KindCounts&, const KindCounts&) = default;
};

struct MatchResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  /// Frames from interval start to the matching event, in match order.
  std::vector<std::int64_t> latencies;
  /// TP/FN keyed by truth kind, FP keyed by event kind.
  std::map<TamperKind, KindCounts> by_kind;

  void merge(const MatchResult& other);
  std::optional<double> mean_latency() const;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Greedy chronological matching. Each event takes the earliest unmatched
/// interval whose [start, end + window] contains its frame and whose kind
/// equals the event kind (Generic events accept any kind). Unmatched events
/// are false positives, unmatched intervals false negatives.
/// Throws DomainError if events are not sorted by frame index.
MatchResult match_events(std::span<const TamperEvent> events,
                         std::span<const synth::LabeledInterval> truth,
                         std::int64_t window = kDefaultMatchWindow);

struct Rates {
  double true_detection_rate = 0.0;   // TP / (TP + FN), 0 when no truth
  double false_detection_rate = 0.0;  // FP / (TP + FP), 0 when no events matched or emitted
};

Rates rates_of(std::size_t tp, std::size_t fp, std::size_t fn);

struct RateReport {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double true_detection_rate = 0.0;
  double false_detection_rate = 0.0;
  std::optional<double> mean_latency;
  std::map<TamperKind, Rates> per_kind;
  std::map<TamperKind, KindCounts> per_kind_counts;
  DetectorConfig config;
};

RateReport compute_rates(const MatchResult& match, const DetectorConfig& config = {});

/// One detector's result on one clip.
struct ClipResult {
  std::string clip;
  std::string detector;
  std::string truth_kinds;  // "|"-joined kinds of the clip's intervals, or "none"
  MatchResult match;
};

struct CorpusEvaluation {
  std::vector<ClipResult> clips;  // clip order of the corpus
  RateReport total;
};

/// Runs a fresh detector per clip and aggregates in clip order.
/// Clips are processed on up to `threads` workers; results do not depend on it.
CorpusEvaluation evaluate(std::string_view detector_id, const DetectorConfig& config,
                          const std::vector<synth::RenderedClip>& corpus,
                          std::int64_t window = kDefaultMatchWindow, unsigned threads = 1);

/// One full corpus evaluation per value of `param_name`, in the given order.
/// Throws ConfigError for an unknown parameter name.
std::vector<RateReport> sweep(std::string_view detector_id, std::string_view param_name,
                              std::span<const double> values,
                              const std::vector<synth::RenderedClip>& corpus,
                              const DetectorConfig& base = {},
                              std::int64_t window = kDefaultMatchWindow);

std::string truth_kinds_label(std::span<const synth::LabeledInterval> truth);

// Report files. CSV columns: clip,detector,kind,TP,FP,FN,TDR,FDR,mean_latency
std::string report_csv(std::span<const ClipResult> rows);
std::string report_json(std::span<const ClipResult> rows, std::int64_t window,
                        const std::optional<DetectorConfig>& config = std::nullopt);

// Event lines: {"detector":..., "kind":..., "frame":..., "score":...}
std::string event_to_json_line(const TamperEvent& event);
std::string events_to_jsonl(std::span<const TamperEvent> events);
/// Throws ValidationError (with line number) on schema mismatch.
std::vector<TamperEvent> events_from_jsonl(std::string_view text);

}  // namespace camtamper::eval
