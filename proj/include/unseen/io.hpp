#pragma once

// Text formats: whitespace-separated counts, CSV joint tables, and
// `key = value` sweep configurations. All parsers throw InputError.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "unseen/model.hpp"
#include "unseen/simulate.hpp"

namespace unseen {

CountVector parse_counts(std::istream& in);
CountVector read_counts_file(const std::filesystem::path& path);

/// Rows are the first axis; every row must have the same length.
JointCountTable parse_joint_csv(std::istream& in);
JointCountTable read_joint_csv_file(const std::filesystem::path& path);

/// Recognized keys:
///   target      entropy | mutual_information
///   grid        space-separated entries, each `dirichlet:C` or `power_law:ALPHA`
///   m, N, replicates, seed, threads, quad_nodes
///   roster      space-separated estimator names
///   prior_c_min, prior_c_max, prior_m_max, prior_marginal_m_max, nsb_k_max, nsb_marginal_k_max
/// `#` starts a comment. Unknown keys are rejected by name.
SweepSpec parse_sweep_config(std::istream& in);
SweepSpec read_sweep_config_file(const std::filesystem::path& path);

}  // namespace unseen
