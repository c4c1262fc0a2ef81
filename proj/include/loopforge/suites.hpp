#pragma once

#include "loopforge/quasigroup.hpp"
#include "loopforge/search.hpp"
#include "loopforge/term.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace loopforge {

struct CheckResult {
  std::string name;
  int min_order = 1;
  int max_order = 1;
  bool passed = true;
  /// Short key=value summary (counts, witnesses).
  std::string detail;
  /// Serialized counterexample, empty when none was written.
  std::string witness_path;
  double elapsed_seconds = 0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct SuiteOptions {
  /// Highest order to examine; 0 selects the suite's default.
  int max_order = 0;
  /// Where failing checks write their witness models; empty disables writing.
  std::string witness_dir = "witnesses";
  std::uint64_t node_budget = kDefaultNodeBudget;
  int threads = 1;
};

/// Names accepted by run_suite, in a fixed order.
const std::vector<std::string>& suite_names();
int default_max_order(std::string_view suite);

/// Runs a named verification suite. Throws Error for an unknown name.
SuiteReport run_suite(std::string_view suite, const SuiteOptions& options = {});

/// One "key=value" record per check; elapsed times go on separate lines
/// starting with "# elapsed" so golden comparisons can drop them.
void print_report(std::ostream& os, const SuiteReport& report);

/// Equational forms of the two conjugacy-closure conditions, used only to
/// prune searches. Every model they admit is re-checked with is_CC.
///   left:  x*(y*z) = ((x*y)/x)*(x*z)
///   right: (z*y)*x = (z*x)*(x\(y*x))
const Identity& lcc_identity();
const Identity& rcc_identity();

/// Every nonassociative CC-loop of order 1..max_order, one per isomorphism
/// class (canonical form), validated with is_CC.
std::vector<Loop> nonassociative_cc_loops(int max_order, const SuiteOptions& options = {});

/// All loops of the given order up to isomorphism.
std::vector<Loop> loops_up_to_iso(int order, const SuiteOptions& options = {});

}  // namespace loopforge
