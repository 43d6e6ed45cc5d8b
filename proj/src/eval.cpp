#include "camtamper/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "camtamper/errors.hpp"

namespace camtamper::eval {

using nlohmann::json;

void MatchResult::merge(const MatchResult& other) {
  true_positives += other.true_positives;
  false_positives += other.false_positives;
  false_negatives += other.false_negatives;
  latencies.insert(latencies.end(), other.latencies.begin(), other.latencies.end());
  for (const auto& [kind, c] : other.by_kind) {
    KindCounts& mine = by_kind[kind];
    mine.true_positives += c.true_positives;
    mine.false_positives += c.false_positives;
    mine.false_negatives += c.false_negatives;
  }
}

std::optional<double> MatchResult::mean_latency() const {
  if (latencies.empty()) return std::nullopt;
  const double sum = std::accumulate(latencies.begin(), latencies.end(), 0.0);
  return sum / static_cast<double>(latencies.size());
}

MatchResult match_events(std::span<const TamperEvent> events,
                         std::span<const synth::LabeledInterval> truth, std::int64_t window) {
  if (window < 0) throw DomainError("match window must be non-negative");
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].frame_index < events[i - 1].frame_index) {
      throw DomainError("events must be sorted by frame index");
    }
  }

  // Earliest interval first; ties keep the given order.
  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return truth[a].start < truth[b].start;
  });
  std::vector<bool> matched(truth.size(), false);

  MatchResult result;
  for (const TamperEvent& e : events) {
    bool hit = false;
    for (std::size_t idx : order) {
      const synth::LabeledInterval& iv = truth[idx];
      if (matched[idx]) continue;
      if (e.kind != TamperKind::Generic && e.kind != iv.kind) continue;
      if (e.frame_index < iv.start || e.frame_index > iv.end + window) continue;
      matched[idx] = true;
      hit = true;
      ++result.true_positives;
      ++result.by_kind[iv.kind].true_positives;
      result.latencies.push_back(e.frame_index - iv.start);
      break;
    }
    if (!hit) {
      ++result.false_positives;
      ++result.by_kind[e.kind].false_positives;
    }
  }
  for (std::size_t idx = 0; idx < truth.size(); ++idx) {
    if (!matched[idx]) {
      ++result.false_negatives;
      ++result.by_kind[truth[idx].kind].false_negatives;
    }
  }
  return result;
}

Rates rates_of(std::size_t tp, std::size_t fp, std::size_t fn) {
  Rates r;
  if (tp + fn > 0) r.true_detection_rate = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (tp + fp > 0) r.false_detection_rate = static_cast<double>(fp) / static_cast<double>(tp + fp);
  return r;
}

RateReport compute_rates(const MatchResult& match, const DetectorConfig& config) {
  RateReport report;
  report.true_positives = match.true_positives;
  report.false_positives = match.false_positives;
  report.false_negatives = match.false_negatives;
  const Rates r = rates_of(match.true_positives, match.false_positives, match.false_negatives);
  report.true_detection_rate = r.true_detection_rate;
  report.false_detection_rate = r.false_detection_rate;
  report.mean_latency = match.mean_latency();
  report.per_kind_counts = match.by_kind;
  for (const auto& [kind, c] : match.by_kind) {
    report.per_kind[kind] = rates_of(c.true_positives, c.false_positives, c.false_negatives);
  }
  report.config = config;
  return report;
}

std::string truth_kinds_label(std::span<const synth::LabeledInterval> truth) {
  if (truth.empty()) return "none";
  std::vector<std::string> kinds;
  for (const auto& iv : truth) {
    std::string k(to_string(iv.kind));
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  std::string out;
  for (const auto& k : kinds) {
    if (!out.empty()) out += '|';
    out += k;
  }
  return out;
}

CorpusEvaluation evaluate(std::string_view detector_id, const DetectorConfig& config,
                          const std::vector<synth::RenderedClip>& corpus, std::int64_t window,
                          unsigned threads) {
  config.validate();
  (void)make_detector(detector_id, config);  // reject unknown ids before spawning work

  CorpusEvaluation out;
  out.clips.resize(corpus.size());
  auto work = [&](std::size_t i) {
    const synth::RenderedClip& clip = corpus[i];
    const auto events = run_detector(detector_id, config, clip.frames);
    ClipResult& row = out.clips[i];
    row.clip = clip.name;
    row.detector = std::string(detector_id);
    row.truth_kinds = truth_kinds_label(clip.truth.intervals);
    row.match = match_events(events, clip.truth.intervals, window);
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(corpus.size())));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < corpus.size(); i = next++) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  MatchResult total;
  for (const auto& row : out.clips) total.merge(row.match);
  out.total = compute_rates(total, config);
  return out;
}

std::vector<RateReport> sweep(std::string_view detector_id, std::string_view param_name,
                              std::span<const double> values,
                              const std::vector<synth::RenderedClip>& corpus,
                              const DetectorConfig& base, std::int64_t window) {
  (void)base.get(param_name);  // unknown names fail even for an empty sweep
  std::vector<RateReport> reports;
  reports.reserve(values.size());
  for (double v : values) {
    DetectorConfig cfg = base;
    cfg.set_value(param_name, v);
    reports.push_back(evaluate(detector_id, cfg, corpus, window).total);
  }
  return reports;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json latency_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json counts_json(std::size_t tp, std::size_t fp, std::size_t fn) {
  const Rates r = rates_of(tp, fp, fn);
  return json{{"tp", tp},
              {"fp", fp},
              {"fn", fn},
              {"tdr", r.true_detection_rate},
              {"fdr", r.false_detection_rate}};
}

}  // namespace

std::string report_csv(std::span<const ClipResult> rows) {
  std::ostringstream os;
  os << "clip,detector,kind,TP,FP,FN,TDR,FDR,mean_latency\n";
  for (const auto& row : rows) {
    const MatchResult& m = row.match;
    const Rates r = rates_of(m.true_positives, m.false_positives, m.false_negatives);
    const auto lat = m.mean_latency();
    os << row.clip << ',' << row.detector << ',' << row.truth_kinds << ',' << m.true_positives
       << ',' << m.false_positives << ',' << m.false_negatives << ','
       << fixed(r.true_detection_rate, 6) << ',' << fixed(r.false_detection_rate, 6) << ','
       << (lat ? fixed(*lat, 3) : std::string()) << '\n';
  }
  return os.str();
}

std::string report_json(std::span<const ClipResult> rows, std::int64_t window,
                        const std::optional<DetectorConfig>& config) {
  json doc;
  doc["window"] = window;
  json jrows = json::array();
  std::vector<std::string> detector_order;
  std::map<std::string, MatchResult> per_detector;
  for (const auto& row : rows) {
    const MatchResult& m = row.match;
    json j = counts_json(m.true_positives, m.false_positives, m.false_negatives);
    j["clip"] = row.clip;
    j["detector"] = row.detector;
    j["kind"] = row.truth_kinds;
    j["mean_latency"] = latency_json(m.mean_latency());
    jrows.push_back(std::move(j));
    if (!per_detector.count(row.detector)) detector_order.push_back(row.detector);
    per_detector[row.detector].merge(m);
  }
  doc["rows"] = std::move(jrows);

  json detectors = json::object();
  for (const auto& id : detector_order) {
    const MatchResult& m = per_detector[id];
    json j = counts_json(m.true_positives, m.false_positives, m.false_negatives);
    j["mean_latency"] = latency_json(m.mean_latency());
    json kinds = json::object();
    for (const auto& [kind, c] : m.by_kind) {
      kinds[std::string(to_string(kind))] =
          counts_json(c.true_positives, c.false_positives, c.false_negatives);
    }
    j["per_kind"] = std::move(kinds);
    detectors[id] = std::move(j);
  }
  doc["detectors"] = std::move(detectors);
  if (config) doc["config"] = json::parse(config->to_json());
  return doc.dump(2) + "\n";
}

std::string event_to_json_line(const TamperEvent& event) {
  json j{{"detector", event.detector_id},
         {"kind", std::string(to_string(event.kind))},
         {"frame", event.frame_index},
         {"score", event.score}};
  return j.dump();
}

std::string events_to_jsonl(std::span<const TamperEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += event_to_json_line(e);
    out += '\n';
  }
  return out;
}

std::vector<TamperEvent> events_from_jsonl(std::string_view text) {
  std::vector<TamperEvent> events;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (eol == text.size()) break;
      continue;
    }
    const std::string where = "events line " + std::to_string(line_no);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ValidationError(where + ": not a JSON object");
    auto need = [&](const char* key) -> const json& {
      auto it = j.find(key);
      if (it == j.end()) throw ValidationError(where + ": missing field '" + key + "'");
      return *it;
    };
    const json& det = need("detector");
    const json& kind = need("kind");
    const json& frame = need("frame");
    const json& score = need("score");
    if (!det.is_string()) throw ValidationError(where + ": 'detector' must be a string");
    if (!kind.is_string()) throw ValidationError(where + ": 'kind' must be a string");
    if (!frame.is_number_integer() || frame.get<std::int64_t>() < 0) {
      throw ValidationError(where + ": 'frame' must be a non-negative integer");
    }
    if (!score.is_number()) throw ValidationError(where + ": 'score' must be a number");
    TamperEvent e;
    e.detector_id = det.get<std::string>();
    try {
      e.kind = parse_tamper_kind(kind.get<std::string>());
    } catch (const ValidationError& ex) {
      throw ValidationError(where + ": " + ex.what());
    }
    e.frame_index = frame.get<std::int64_t>();
    e.score = score.get<double>();
    events.push_back(std::move(e));
    if (eol == text.size()) break;
  }
  return events;
}

}  // namespace camtamper::eval
