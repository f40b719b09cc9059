#include "chebdisc/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "chebdisc/error.hpp"

namespace chebdisc {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

bool is_header(const std::string& line) {
  const auto first = line.find_first_not_of(" \t");
  return first != std::string::npos && std::isalpha(static_cast<unsigned char>(line[first]));
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t\r", used) != std::string::npos) throw FormatError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad number '" + s + "'");
  }
}

long long parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v)) throw FormatError("expected an integer, got '" + s + "'");
  return static_cast<long long>(v);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_index_set_text(std::ostream& out, const IndexSet& set) {
  out << "d " << set.dim() << " card " << set.size() << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto k = set[i];
    for (std::size_t j = 0; j < k.size(); ++j) out << (j ? " " : "") << k[j];
    out << '\n';
  }
}

IndexSet read_index_set_text(std::istream& in) {
  std::string tag_d;
  std::string tag_card;
  std::size_t d = 0;
  std::size_t card = 0;
  if (!(in >> tag_d >> d >> tag_card >> card) || tag_d != "d" || tag_card != "card" || d == 0) {
    throw FormatError("index set header must read 'd <d> card <n>'");
  }
  std::vector<std::int32_t> flat;
  flat.reserve(d * card);
  long long v = 0;
  while (in >> v) {
    if (v < 0 || v > std::numeric_limits<std::int32_t>::max()) throw FormatError("frequency out of range");
    flat.push_back(static_cast<std::int32_t>(v));
  }
  if (!in.eof()) throw FormatError("unexpected token in index set");
  if (flat.size() != d * card) {
    throw FormatError("index set declares " + std::to_string(card) + " vectors but holds " +
                      std::to_string(flat.size()) + " entries");
  }
  IndexSet set(d, std::move(flat));
  if (set.size() != card) throw FormatError("index set contains duplicates");
  return set;
}

nlohmann::json index_set_to_json(const IndexSet& set) {
  nlohmann::json freqs = nlohmann::json::array();
  for (std::size_t i = 0; i < set.size(); ++i) freqs.push_back(set.vector(i));
  return {{"d", set.dim()}, {"card", set.size()}, {"freqs", std::move(freqs)}};
}

IndexSet index_set_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    auto freqs = j.at("freqs").get<std::vector<FrequencyVector>>();
    IndexSet set(d, freqs);
    if (j.contains("card") && j.at("card").get<std::size_t>() != set.size()) {
      throw FormatError("index set cardinality does not match its vectors");
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed index set JSON: ") + e.what());
  }
}

IndexSet load_index_set(const std::filesystem::path& path) {
  auto in = open_in(path);
  in >> std::ws;
  if (in.peek() == '{') {
    try {
      return index_set_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(e.what());
    }
  }
  return read_index_set_text(in);
}

void save_index_set(const std::filesystem::path& path, const IndexSet& set, bool json) {
  auto out = open_out(path);
  if (json) {
    out << index_set_to_json(set).dump() << '\n';
  } else {
    write_index_set_text(out, set);
  }
}

nlohmann::json discretization_to_json(const MultiLatticeDiscretization& disc) {
  nlohmann::json lattices = nlohmann::json::array();
  for (const auto& lat : disc.lattices) {
    lattices.push_back({{"z", std::vector<std::int64_t>(lat.generator().begin(), lat.generator().end())},
                        {"M", lat.size()}});
  }
  nlohmann::json params = {{"c", disc.params.c},
                           {"r", disc.params.r},
                           {"L", disc.L},
                           {"threshold", disc.params.threshold == ThresholdRule::half ? "half" : "theory"},
                           {"ring", disc.params.ring}};
  if (disc.params.delta) params["delta"] = *disc.params.delta;
  if (disc.params.iter_cap) params["iter_cap"] = *disc.params.iter_cap;
  return {{"dim", disc.index_set.dim()},
          {"strategy", to_string(disc.strategy)},
          {"seed", disc.params.seed},
          {"lattices", std::move(lattices)},
          {"covered_per_lattice", disc.covered},
          {"node_count", disc.node_count},
          {"sample_count", disc.sample_count()},
          {"success", disc.success},
          {"params", std::move(params)},
          {"index_set", index_set_to_json(disc.index_set)}};
}

MultiLatticeDiscretization discretization_from_json(const nlohmann::json& j, const IndexSet* fallback) {
  try {
    std::optional<IndexSet> embedded;
    if (j.contains("index_set")) embedded = index_set_from_json(j.at("index_set"));
    if (fallback != nullptr) embedded = *fallback;
    if (!embedded) throw FormatError("discretization carries no index set; pass one explicitly");
    const IndexSet& set = *embedded;
    if (j.at("dim").get<std::size_t>() != set.dim()) {
      throw FormatError("discretization dimension does not match the index set");
    }

    StrategyParams params;
    params.seed = j.value("seed", std::uint64_t{0});
    int L = 0;
    if (j.contains("params")) {
      const auto& p = j.at("params");
      params.c = p.value("c", 2.0);
      params.r = p.value("r", 1.0);
      L = p.value("L", 0);
      params.ring = p.value("ring", false);
      params.threshold = p.value("threshold", std::string("half")) == "theory" ? ThresholdRule::theory
                                                                               : ThresholdRule::half;
      if (p.contains("delta")) params.delta = p.at("delta").get<double>();
      if (p.contains("iter_cap")) params.iter_cap = p.at("iter_cap").get<int>();
    }

    std::vector<Rank1Lattice> lattices;
    for (const auto& item : j.at("lattices")) {
      lattices.emplace_back(item.at("z").get<std::vector<std::int64_t>>(), item.at("M").get<std::uint64_t>());
      if (lattices.back().dim() != set.dim()) throw FormatError("lattice dimension mismatch");
    }

    std::vector<std::vector<std::uint32_t>> covered;
    const bool keep = j.contains("covered_per_lattice") && fallback == nullptr;
    if (keep) {
      covered = j.at("covered_per_lattice").get<std::vector<std::vector<std::uint32_t>>>();
      if (covered.size() != lattices.size()) throw FormatError("covered_per_lattice has the wrong length");
    } else {
      // first lattice covering an index gets the credit
      const MirrorTable table(set);
      std::vector<bool> seen(set.size(), false);
      for (const auto& lat : lattices) {
        std::vector<std::uint32_t> fresh;
        for (std::uint32_t p : table.covered(lat, params.ring ? AliasRule::ring : AliasRule::unique)) {
          if (!seen[p]) {
            seen[p] = true;
            fresh.push_back(p);
          }
        }
        covered.push_back(std::move(fresh));
      }
    }
    std::vector<bool> hit(set.size(), false);
    for (const auto& c : covered) {
      for (std::uint32_t p : c) {
        if (p >= set.size() || hit[p]) throw FormatError("covered sets must be disjoint positions into I");
        hit[p] = true;
      }
    }
    std::vector<std::uint32_t> residual;
    for (std::size_t p = 0; p < set.size(); ++p) {
      if (!hit[p]) residual.push_back(static_cast<std::uint32_t>(p));
    }

    MultiLatticeDiscretization disc{set, std::move(lattices), std::move(covered), std::move(residual),
                                    false, 0, parse_strategy(j.value("strategy", std::string("plain"))),
                                    params, L, {}};
    disc.success = disc.residual.empty();
    disc.node_count = disc.lattices.empty() ? 0 : union_nodes(disc.lattices).size();
    return disc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed discretization JSON: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid discretization: ") + e.what());
  }
}

MultiLatticeDiscretization load_discretization(const std::filesystem::path& path, const IndexSet* fallback) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what());
  }
  return discretization_from_json(j, fallback);
}

void save_discretization(const std::filesystem::path& path, const MultiLatticeDiscretization& disc) {
  auto out = open_out(path);
  out << discretization_to_json(disc).dump() << '\n';
}

nlohmann::json verification_to_json(const VerificationResult& v) {
  auto finite = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  return {{"full_rank", v.full_rank},
          {"rank", v.rank},
          {"rows", v.rows},
          {"cols", v.cols},
          {"condition_number", finite(v.condition_number)},
          {"singular_value_min", v.singular_value_min},
          {"singular_value_max", v.singular_value_max},
          {"method", to_string(v.method)}};
}

void write_samples_csv(std::ostream& out, const SampleVector& samples) {
  out << "lattice,j,value\n" << std::setprecision(17);
  for (std::size_t l = 0; l < samples.blocks.size(); ++l) {
    for (std::size_t j = 0; j < samples.blocks[l].size(); ++j) {
      out << l << ',' << j << ',' << samples.blocks[l][j] << '\n';
    }
  }
}

SampleVector read_samples_csv(std::istream& in, const MultiLatticeDiscretization& disc) {
  SampleVector s;
  s.blocks.resize(disc.lattices.size());
  std::vector<std::vector<bool>> seen(disc.lattices.size());
  for (std::size_t l = 0; l < disc.lattices.size(); ++l) {
    s.blocks[l].assign(disc.lattices[l].size(), 0.0);
    seen[l].assign(disc.lattices[l].size(), false);
  }
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (blank(line) || is_header(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw FormatError("sample rows need lattice,j,value");
    const auto l = parse_int(cells[0]);
    const auto j = parse_int(cells[1]);
    if (l < 0 || static_cast<std::size_t>(l) >= s.blocks.size() || j < 0 ||
        static_cast<std::size_t>(j) >= s.blocks[static_cast<std::size_t>(l)].size()) {
      throw FormatError("sample index (" + cells[0] + "," + cells[1] + ") out of range");
    }
    const auto li = static_cast<std::size_t>(l);
    const auto ji = static_cast<std::size_t>(j);
    if (seen[li][ji]) throw FormatError("duplicate sample (" + cells[0] + "," + cells[1] + ")");
    seen[li][ji] = true;
    s.blocks[li][ji] = parse_double(cells[2]);
    ++count;
  }
  if (count != s.total()) {
    throw FormatError("expected " + std::to_string(s.total()) + " samples, read " + std::to_string(count));
  }
  return s;
}

void write_coefficients_csv(std::ostream& out, const IndexSet& set, const ChebCoefficients& c) {
  for (std::size_t i = 0; i < set.dim(); ++i) out << 'k' << i + 1 << ',';
  out << "value\n" << std::setprecision(17);
  for (std::size_t p = 0; p < set.size(); ++p) {
    for (std::int32_t v : set[p]) out << v << ',';
    out << c.values[p] << '\n';
  }
}

ChebCoefficients read_coefficients_csv(std::istream& in, const IndexSet& set) {
  ChebCoefficients c{std::vector<double>(set.size(), 0.0)};
  std::string line;
  FrequencyVector k(set.dim());
  while (std::getline(in, line)) {
    if (blank(line) || is_header(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != set.dim() + 1) throw FormatError("coefficient rows need d frequencies and a value");
    for (std::size_t i = 0; i < set.dim(); ++i) k[i] = static_cast<std::int32_t>(parse_int(cells[i]));
    const auto pos = set.find(k);
    if (!pos) throw FormatError("coefficient frequency not in the index set: " + line);
    c.values[*pos] = parse_double(cells.back());
  }
  return c;
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes) {
  for (std::size_t i = 0; i < nodes.dim(); ++i) out << (i ? "," : "") << 'x' << i + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto x = nodes.point(n);
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
    out << '\n';
  }
}

}  // namespace chebdisc
