// Acceptance driver: one PASS/FAIL line per criterion, C1..C13.
// Exits 0 once every criterion has been evaluated; with --strict it exits 1
// if any criterion failed.

#include <chrono>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "dfpp/io.hpp"
#include "dfpp/verify.hpp"

using namespace dfpp;
using verify::Verdict;

namespace {

struct Timed {
  Verdict verdict;
  double seconds;
};

Timed timed(const std::function<Verdict()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v = f();
  return {std::move(v), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

// Criteria with a hard runtime budget fail when they exceed it.
void enforce_budget(Timed& t, double limit) {
  if (t.seconds >= limit) {
    t.verdict.pass = false;
    t.verdict.detail += " [runtime " + verify::num(t.seconds) + " s exceeds " + verify::num(limit) + " s]";
  }
}

// Suites rerun with different worker counts must write identical bytes,
// both in memory and after a round trip through the file system.
Verdict check_worker_determinism(const verify::Options& base) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "dfpp_acceptance";
  fs::remove_all(root);
  bool ok = true;
  int files = 0;
  std::string detail;
  for (const std::string suite : {"structure", "coupling", "growth"}) {
    std::map<unsigned, verify::SuiteResult> runs;
    for (unsigned w : {1u, 3u}) {
      verify::Options opt = base;
      opt.workers = w;
      runs[w] = verify::run_suite(suite, opt);
      for (const auto& [name, content] : runs[w].files) io::write_text(root / std::to_string(w) / name, content);
    }
    bool same = runs[1].files == runs[3].files;
    for (const auto& [name, content] : runs[1].files) {
      same = same && io::compare_outputs(io::read_text(root / "1" / name), io::read_text(root / "3" / name));
      ++files;
    }
    ok = ok && same;
    detail += suite + (same ? "=identical " : "=DIFFERENT ");
  }
  fs::remove_all(root);
  Verdict v{"C13", "byte-identical outputs across worker counts", ok, detail + "files=" + std::to_string(files), {}};
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--strict") == 0) strict = true;

  verify::Options opt;
  int passed = 0, total = 0;
  const auto report = [&](const Timed& t) {
    ++total;
    passed += t.verdict.pass ? 1 : 0;
    std::cout << t.verdict.id << " " << (t.verdict.pass ? "PASS" : "FAIL") << "  " << t.verdict.name << ": "
              << t.verdict.detail << " (" << verify::num(t.seconds) << " s)" << std::endl;
  };

  // p_c from the first of the C7 seeds feeds C4, C6 and C10.
  std::vector<double> pcs;
  Timed c7 = timed([&] { return verify::check_right_edge(opt, &pcs); });
  opt.pc_hat = pcs.at(0);

  Timed c1 = timed([&] { return verify::check_dp_correctness(opt); });
  enforce_budget(c1, 5.0);
  report(c1);
  Timed c2 = timed([&] { return verify::check_point_mass(opt); });
  enforce_budget(c2, 1.0);
  report(c2);
  report(timed([&] { return verify::check_subcritical(opt); }));
  report(timed([&] { return verify::check_supercritical_cone(opt, *opt.pc_hat); }));
  report(timed([&] { return verify::check_supercritical_off_cone(opt); }));
  report(timed([&] { return verify::check_critical(opt, *opt.pc_hat); }));
  report(c7);
  report(timed([&] { return verify::check_cone_calibration(opt); }));
  Timed c9 = timed([&] { return verify::check_ball_structure(opt); });
  enforce_budget(c9, 60.0);
  report(c9);
  Timed c10 = timed([&] { return verify::check_coupling(opt); });
  enforce_budget(c10, 60.0);
  report(c10);
  report(timed([&] { return verify::check_growth(opt); }));
  report(timed([&] { return verify::check_convexity_symmetry(opt); }));
  report(timed([&] { return check_worker_determinism(opt); }));

  std::cout << passed << "/" << total << " criteria passed" << std::endl;
  return strict && passed != total ? 1 : 0;
}
