#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "chebdisc/chebtransform.hpp"
#include "chebdisc/construct.hpp"
#include "chebdisc/indexset.hpp"
#include "chebdisc/verify.hpp"

namespace chebdisc {

/// Raised for malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index sets. Text: "d <d> card <n>" then one vector per line.
void write_index_set_text(std::ostream& out, const IndexSet& set);
IndexSet read_index_set_text(std::istream& in);
nlohmann::json index_set_to_json(const IndexSet& set);
IndexSet index_set_from_json(const nlohmann::json& j);
/// Detects JSON by a leading '{'.
IndexSet load_index_set(const std::filesystem::path& path);
void save_index_set(const std::filesystem::path& path, const IndexSet& set, bool json);

// Discretizations.
nlohmann::json discretization_to_json(const MultiLatticeDiscretization& disc);
/// Restores lattices, covered sets and (if present) the index set. Without an
/// embedded index set `fallback` is used; the covered sets are then recomputed
/// only if absent. Throws FormatError if no index set is available.
MultiLatticeDiscretization discretization_from_json(const nlohmann::json& j,
                                                    const IndexSet* fallback = nullptr);
MultiLatticeDiscretization load_discretization(const std::filesystem::path& path,
                                               const IndexSet* fallback = nullptr);
void save_discretization(const std::filesystem::path& path, const MultiLatticeDiscretization& disc);

nlohmann::json verification_to_json(const VerificationResult& v);

// CSV: samples as "lattice,j,value"; coefficients as "k1,...,kd,value".
void write_samples_csv(std::ostream& out, const SampleVector& samples);
SampleVector read_samples_csv(std::istream& in, const MultiLatticeDiscretization& disc);
void write_coefficients_csv(std::ostream& out, const IndexSet& set, const ChebCoefficients& c);
ChebCoefficients read_coefficients_csv(std::istream& in, const IndexSet& set);
/// One node per row, 17 significant digits.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes);

}  // namespace chebdisc
