#include "unseen/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "unseen/errors.hpp"

namespace unseen {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Count parse_count(const std::string& token) {
  Count v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InputError("not a non-negative integer: '" + token + "'");
  if (v < 0) throw InputError("negative count: '" + token + "'");
  return v;
}

template <class T>
T parse_number(const std::string& key, const std::string& token) {
  T v{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError("invalid value for '" + key + "': '" + token + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

CountVector parse_counts(std::istream& in) {
  std::vector<Count> counts;
  for (std::string token; in >> token;) counts.push_back(parse_count(token));
  if (counts.empty()) throw InputError("counts input is empty");
  return CountVector(std::move(counts));
}

CountVector read_counts_file(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_counts(in);
}

JointCountTable parse_joint_csv(std::istream& in) {
  std::vector<std::vector<Count>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<Count> row;
    std::istringstream ls(t);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(parse_count(trim(cell)));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("ragged CSV: line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                       " cells, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("joint table is empty");
  return JointCountTable::from_rows(rows);
}

JointCountTable read_joint_csv_file(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_joint_csv(in);
}

SweepSpec parse_sweep_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InputError("line " + std::to_string(line_no) + ": expected 'key = value'");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }

  SweepSpec spec;
  Count m = 100;
  std::vector<std::string> grid_tokens;
  for (const auto& [key, value] : kv) {
    if (key == "target") {
      if (value == "entropy") {
        spec.target = TargetFunctional::entropy;
      } else if (value == "mutual_information") {
        spec.target = TargetFunctional::mutual_information;
      } else {
        throw InputError("invalid value for 'target': '" + value + "'");
      }
    } else if (key == "grid") {
      grid_tokens = split_ws(value);
    } else if (key == "m") {
      m = parse_number<Count>(key, value);
    } else if (key == "N") {
      spec.sample_size = parse_number<Count>(key, value);
    } else if (key == "replicates") {
      spec.replicates = parse_number<int>(key, value);
    } else if (key == "seed") {
      spec.base_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "threads") {
      spec.threads = parse_number<int>(key, value);
    } else if (key == "quad_nodes") {
      spec.quad_nodes = parse_number<int>(key, value);
    } else if (key == "roster") {
      for (const auto& name : split_ws(value)) {
        const auto e = parse_estimator(name);
        if (!e) throw InputError("invalid value for 'roster': unknown estimator '" + name + "'");
        spec.roster.push_back(*e);
      }
    } else if (key == "prior_c_min") {
      spec.prior_c_min = parse_number<double>(key, value);
    } else if (key == "prior_c_max") {
      spec.prior_c_max = parse_number<double>(key, value);
    } else if (key == "prior_m_max") {
      spec.prior_m_max = parse_number<Count>(key, value);
    } else if (key == "prior_marginal_m_max") {
      spec.prior_marginal_m_max = parse_number<Count>(key, value);
    } else if (key == "nsb_k_max") {
      spec.nsb_k_max = parse_number<Count>(key, value);
    } else if (key == "nsb_marginal_k_max") {
      spec.nsb_marginal_k_max = parse_number<Count>(key, value);
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }

  if (grid_tokens.empty()) throw InputError("config key 'grid' is missing or empty");
  if (spec.roster.empty()) throw InputError("config key 'roster' is missing or empty");
  if (m < 1) throw InputError("invalid value for 'm': must be >= 1");
  if (spec.sample_size < 0) throw InputError("invalid value for 'N': must be >= 0");
  if (spec.replicates < 1) throw InputError("invalid value for 'replicates': must be >= 1");
  for (const auto& tok : grid_tokens) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw InputError("invalid value for 'grid': '" + tok + "'");
    const std::string family = tok.substr(0, colon);
    const double param = parse_number<double>("grid", tok.substr(colon + 1));
    if (family == "dirichlet") {
      if (!(param > 0.0)) throw InputError("invalid value for 'grid': concentration must be positive");
      spec.grid.push_back(DirichletGen{param, m});
    } else if (family == "power_law") {
      if (!(param >= 0.0)) throw InputError("invalid value for 'grid': exponent must be non-negative");
      spec.grid.push_back(PowerLawGen{param, m, std::nullopt});
    } else {
      throw InputError("invalid value for 'grid': unknown generator '" + family + "'");
    }
  }
  return spec;
}

SweepSpec read_sweep_config_file(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_sweep_config(in);
}

}  // namespace unseen
