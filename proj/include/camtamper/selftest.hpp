#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace camtamper {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  bool bench = false;
  bool inject_fault = false;  // scales the DCT by a wrong factor while checks run
  int bench_frames = 60;
  double bench_min_fps = 15.0;
};

/// Embedded oracle checks: transform round trips, Parseval, naive DFT,
/// histogram and entropy identities. With `bench`, also times the combined
/// detector on 640x480 frames.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

struct BenchResult {
  int width = 0;
  int height = 0;
  int frames = 0;
  double seconds = 0.0;
  double fps = 0.0;
};

BenchResult bench_combined(int width, int height, int frames);

/// Writes one "check,status" line per result; measurements go to `details`.
void print_checks(std::ostream& out, const std::vector<CheckResult>& results,
                  std::ostream* details = nullptr);

}  // namespace camtamper
