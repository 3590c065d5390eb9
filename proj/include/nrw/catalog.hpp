#ifndef NRW_CATALOG_HPP
#define NRW_CATALOG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nrw/extension.hpp"

namespace nrw {

/// One named parameter of a catalog entry.
struct ParamSpec {
  std::string name;
  double def;
  std::string domain; // human-readable constraint, e.g. "alpha > 0"
};

/// Registry record: name, parameters, and known transcription caveats.
struct CatalogEntry {
  std::string name;
  std::vector<ParamSpec> params;
  std::string notes;
};

/// One coefficient where constructed and reference tensors disagree.
struct DiffEntry {
  std::string location;
  double constructed;
  double golden;
};

/// Fully instantiated catalog example.
struct CatalogInstance {
  std::string name;
  std::map<std::string, double> params;
  ExtensionData data;       // orthonormalized (B = identity)
  InfinitesimalModel model; // constructed extension
  std::optional<KForm> golden_torsion;             // reference tensors, when available
  std::optional<CurvatureTensor> golden_curvature; // for this parameter point
  std::vector<DiffEntry> diff;
  std::string notes;
};

/// Stable-ordered registry of the built-in examples.
const std::vector<CatalogEntry>& catalog_entries();

/// Build an entry at the given parameter point (missing params take defaults).
/// Throws Error("UnknownEntry") / Error("ParamDomain") on bad input.
CatalogInstance catalog_instantiate(const std::string& name,
                                    const std::map<std::string, double>& overrides = {});

/// Coefficient-wise diff of a model against reference tensors: union of torsion
/// index triples plus Λ²-Gram entries, in deterministic order.
std::vector<DiffEntry> golden_diff(const InfinitesimalModel& model, const KForm& golden_t,
                                   const CurvatureTensor& golden_r, double threshold);

} // namespace nrw

#endif
