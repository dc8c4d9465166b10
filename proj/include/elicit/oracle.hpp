#pragma once

#include "elicit/mechanism.hpp"

#include <cstddef>
#include <memory>

namespace elicit {

/// Pivotalness by enumerating every completion of the unapproached others
/// and testing the flip on the full secret vector. Independent of the
/// binomial formula. Throws Error(CapExceeded) past max_enumerated others.
Rational brute_pivotal(const InfoState& state, const ProblemInstance& instance,
                       int max_enumerated = 24);

/// Determination by enumerating completions.
Determination brute_determine(const InfoState& state, const AnonymousFunctionSpec& fn);

struct OracleVerdict {
  bool exists = false;
  /// A passing mechanism, when one was found.
  std::shared_ptr<const MechanismNode> certificate;
  std::size_t mechanisms_checked = 0;
};

/// Enumerates every earliest-halting adaptive mechanism (depth-first over
/// the reply tree, candidate ranks ascending) and checks each against
/// brute-force incentives. Stops at the first passing one. n <= 4.
OracleVerdict exhaustive_existence(const ProblemInstance& instance, int max_agents = 4);

/// Existence decided by auditing HCF over the whole reply tree.
OracleVerdict hcf_tree_existence(const ProblemInstance& instance, int max_agents = 20);

}  // namespace elicit
