#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "camtamper/errors.hpp"
#include "camtamper/eval.hpp"
#include "clips.hpp"

using namespace camtamper;
using namespace camtamper::eval;
using synth::LabeledInterval;

namespace {

TamperEvent ev(TamperKind kind, std::int64_t frame, std::string det = "d") {
  return TamperEvent{kind, frame, 1.0, std::move(det)};
}

bool can_match(const TamperEvent& e, const LabeledInterval& iv, std::int64_t window) {
  return (e.kind == TamperKind::Generic || e.kind == iv.kind) && e.frame_index >= iv.start &&
         e.frame_index <= iv.end + window;
}

/// Maximum bipartite matching by trying every assignment.
std::size_t optimal_matches(const std::vector<TamperEvent>& events,
                            const std::vector<LabeledInterval>& truth, std::int64_t window) {
  std::vector<bool> used(truth.size(), false);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
    if (i == events.size()) return 0;
    std::size_t best = go(i + 1);
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (used[k] || !can_match(events[i], truth[k], window)) continue;
      used[k] = true;
      best = std::max(best, 1 + go(i + 1));
      used[k] = false;
    }
    return best;
  };
  return go(0);
}

std::vector<synth::RenderedClip> standard_clips() {
  std::vector<synth::RenderedClip> out;
  for (const auto& sc : synth::standard_corpus()) out.push_back(synth::render(sc));
  return out;
}

const std::vector<synth::RenderedClip>& corpus() {
  static const auto clips = standard_clips();
  return clips;
}

}  // namespace

TEST_CASE("matching basics") {
  CHECK(match_events({}, {}, 50) == MatchResult{});
  const std::vector<LabeledInterval> truth{{TamperKind::Occlusion, 100, 199}};
  const std::vector<TamperEvent> hit{ev(TamperKind::Occlusion, 104)};
  MatchResult m = match_events(hit, truth, 50);
  CHECK(m.true_positives == 1);
  CHECK(m.false_positives == 0);
  CHECK(m.false_negatives == 0);
  CHECK(m.latencies == std::vector<std::int64_t>{4});

  m = match_events({}, truth, 50);
  CHECK(m.false_negatives == 1);
  CHECK(compute_rates(m).true_detection_rate == 0.0);
}

TEST_CASE("match window bounds and kinds") {
  const std::vector<LabeledInterval> truth{{TamperKind::Defocus, 10, 20}};
  auto tp = [&](TamperKind k, std::int64_t f, std::int64_t w) {
    const std::vector<TamperEvent> e{ev(k, f)};
    return match_events(e, truth, w).true_positives;
  };
  CHECK(tp(TamperKind::Defocus, 10, 0) == 1);
  CHECK(tp(TamperKind::Defocus, 9, 50) == 0);
  CHECK(tp(TamperKind::Defocus, 20, 0) == 1);
  CHECK(tp(TamperKind::Defocus, 21, 0) == 0);
  CHECK(tp(TamperKind::Defocus, 70, 50) == 1);
  CHECK(tp(TamperKind::Defocus, 71, 50) == 0);
  CHECK(tp(TamperKind::Generic, 15, 0) == 1);
  CHECK(tp(TamperKind::Motion, 15, 0) == 0);
  CHECK_THROWS_AS(match_events(std::vector<TamperEvent>{ev(TamperKind::Defocus, 10)}, truth, -1), DomainError);
}

TEST_CASE("repeated events on one interval count once") {
  const std::vector<LabeledInterval> truth{{TamperKind::Defocus, 10, 20}};
  const std::vector<TamperEvent> events{ev(TamperKind::Defocus, 11), ev(TamperKind::Defocus, 12),
                                        ev(TamperKind::Motion, 13)};
  const MatchResult m = match_events(events, truth, 50);
  CHECK(m.true_positives == 1);
  CHECK(m.false_positives == 2);
  CHECK(m.by_kind.at(TamperKind::Defocus).true_positives == 1);
  CHECK(m.by_kind.at(TamperKind::Defocus).false_positives == 1);
  CHECK(m.by_kind.at(TamperKind::Motion).false_positives == 1);
}

TEST_CASE("unsorted events are rejected") {
  const std::vector<TamperEvent> events{ev(TamperKind::Motion, 5), ev(TamperKind::Motion, 4)};
  CHECK_THROWS_AS(match_events(events, {}, 50), DomainError);
}

TEST_CASE("greedy matching equals the optimal assignment on disjoint layouts") {
  std::mt19937_64 rng(61);
  const TamperKind kinds[] = {TamperKind::Occlusion, TamperKind::Defocus, TamperKind::Motion,
                              TamperKind::Generic};
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t window = std::uniform_int_distribution<int>(0, 10)(rng);
    std::vector<LabeledInterval> truth;
    std::int64_t t = std::uniform_int_distribution<int>(0, 5)(rng);
    const int n_truth = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < n_truth; ++i) {
      const std::int64_t len = std::uniform_int_distribution<int>(0, 8)(rng);
      truth.push_back({kinds[rng() % 3], t, t + len});
      t += len + window + 1 + std::uniform_int_distribution<int>(0, 6)(rng);
    }
    std::vector<TamperEvent> events;
    const int n_events = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int i = 0; i < n_events; ++i) {
      events.push_back(ev(kinds[rng() % 4], std::uniform_int_distribution<int>(0, int(t) + 5)(rng)));
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.frame_index < b.frame_index; });
    const MatchResult m = match_events(events, truth, window);
    const std::size_t best = optimal_matches(events, truth, window);
    CHECK(m.true_positives == best);
    CHECK(m.false_positives == events.size() - best);
    CHECK(m.false_negatives == truth.size() - best);
    CHECK(m.true_positives + m.false_negatives == truth.size());
  }
}

TEST_CASE("matching ignores emission order within a frame on disjoint intervals") {
  std::mt19937_64 rng(62);
  const std::vector<LabeledInterval> truth{{TamperKind::Occlusion, 10, 20}, {TamperKind::Motion, 80, 90},
                                           {TamperKind::Defocus, 150, 160}};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TamperEvent> events;
    for (int i = 0; i < 8; ++i) {
      const TamperKind k = static_cast<TamperKind>(rng() % 4);
      events.push_back(ev(k, 10 * static_cast<std::int64_t>(rng() % 20)));
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.frame_index < b.frame_index; });
    std::vector<TamperEvent> permuted = events;
    for (std::size_t i = 0; i < permuted.size();) {
      std::size_t j = i;
      while (j < permuted.size() && permuted[j].frame_index == permuted[i].frame_index) ++j;
      std::shuffle(permuted.begin() + static_cast<std::ptrdiff_t>(i), permuted.begin() + static_cast<std::ptrdiff_t>(j), rng);
      i = j;
    }
    const MatchResult a = match_events(events, truth, 20), b = match_events(permuted, truth, 20);
    CHECK(a.true_positives == b.true_positives);
    CHECK(a.false_positives == b.false_positives);
    CHECK(a.by_kind == b.by_kind);
  }
}

TEST_CASE("rates") {
  MatchResult m;
  m.true_positives = 19;
  m.false_positives = 1;
  RateReport r = compute_rates(m);
  CHECK(r.false_detection_rate == doctest::Approx(0.05));
  CHECK(r.true_detection_rate == 1.0);

  m = MatchResult{};
  m.false_negatives = 5;
  r = compute_rates(m);
  CHECK(r.true_detection_rate == 0.0);
  CHECK(r.false_detection_rate == 0.0);
  CHECK_FALSE(r.mean_latency.has_value());

  // The paper's Algorithm 5 row reads 4.8% / 95.2%.
  m.true_positives = 20;
  m.false_negatives = 1;
  m.false_positives = 1;
  r = compute_rates(m);
  CHECK(std::round(r.false_detection_rate * 1000.0) / 10.0 == 4.8);
  CHECK(std::round(r.true_detection_rate * 1000.0) / 10.0 == 95.2);
}

TEST_CASE("events JSON lines round trip and schema errors") {
  const std::vector<TamperEvent> events{{TamperKind::Occlusion, 104, 812.5, "combined"},
                                        {TamperKind::Generic, 7, 1.0 / 3.0, "alg5"}};
  CHECK(events_from_jsonl(events_to_jsonl(events)) == events);
  CHECK(events_from_jsonl("").empty());
  CHECK(events_from_jsonl("\n\n").empty());
  CHECK_THROWS_AS(events_from_jsonl("{\"detector\":\"a\",\"kind\":\"occlusion\",\"frame\":1}"), ValidationError);
  CHECK_THROWS_AS(events_from_jsonl("{\"detector\":\"a\",\"kind\":\"fog\",\"frame\":1,\"score\":0}"),
                  ValidationError);
  CHECK_THROWS_AS(events_from_jsonl("{\"detector\":\"a\",\"kind\":\"motion\",\"frame\":-1,\"score\":0}"),
                  ValidationError);
  CHECK_THROWS_AS(events_from_jsonl("not json"), ValidationError);
  try {
    (void)events_from_jsonl(events_to_jsonl(events) + "[]\n");
    FAIL("expected a schema error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("csv report has the fixed column order") {
  ClipResult row{"clip_a", "combined", "occlusion", {}};
  row.match.true_positives = 1;
  row.match.latencies = {4};
  const std::string csv = report_csv(std::vector<ClipResult>{row});
  CHECK(csv ==
        "clip,detector,kind,TP,FP,FN,TDR,FDR,mean_latency\n"
        "clip_a,combined,occlusion,1,0,0,1.000000,0.000000,4.000\n");
  const std::string json = report_json(std::vector<ClipResult>{row}, 50, DetectorConfig{});
  CHECK(json.find("\"window\": 50") != std::string::npos);
  CHECK(json.find("\"config\"") != std::string::npos);
}

TEST_CASE("corpus evaluation is independent of worker count") {
  const auto one = evaluate("alg1", {}, corpus(), 50, 1);
  const auto four = evaluate("alg1", {}, corpus(), 50, 4);
  REQUIRE(one.clips.size() == four.clips.size());
  for (std::size_t i = 0; i < one.clips.size(); ++i) {
    CHECK(one.clips[i].clip == four.clips[i].clip);
    CHECK(one.clips[i].match == four.clips[i].match);
  }
  CHECK(report_csv(one.clips) == report_csv(four.clips));
  CHECK_THROWS_AS(evaluate("alg9", {}, corpus()), ConfigError);
}

TEST_CASE("sweep basics") {
  const std::vector<double> none;
  CHECK(sweep("alg1", "alpha_entropy", none, corpus()).empty());
  CHECK_THROWS_AS(sweep("alg1", "no_such", none, corpus()), ConfigError);
  const std::vector<double> one{0.5};
  const auto reports = sweep("alg1", "alpha_entropy", one, corpus());
  REQUIRE(reports.size() == 1);
  const auto direct = evaluate("alg1", {}, corpus()).total;
  CHECK(reports[0].true_positives == direct.true_positives);
  CHECK(reports[0].false_positives == direct.false_positives);
  CHECK(reports[0].true_detection_rate == direct.true_detection_rate);
}

TEST_CASE("alg1 detection rate grows with alpha_entropy") {
  std::vector<double> alphas;
  for (int i = 1; i <= 9; ++i) alphas.push_back(i / 10.0);
  const auto reports = sweep("alg1", "alpha_entropy", alphas, corpus());
  REQUIRE(reports.size() == alphas.size());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(reports[i].true_detection_rate >= reports[i - 1].true_detection_rate);
    CHECK(reports[i].config.alpha_entropy == alphas[i]);
  }
}

TEST_CASE("combined pipeline debounces with persistence") {
  const std::vector<double> values{1, 3, 5, 8};
  const auto reports = sweep("combined", "persistence", values, corpus());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(reports[i].true_detection_rate >= reports[i - 1].true_detection_rate);
    CHECK(reports[i].false_positives <= reports[i - 1].false_positives);
  }
  CHECK(reports.back().true_detection_rate == 1.0);
}
