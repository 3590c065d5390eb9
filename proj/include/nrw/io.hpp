#ifndef NRW_IO_HPP
#define NRW_IO_HPP

#include <optional>
#include <string>

#include "json.hpp"
#include "nrw/extension.hpp"
#include "nrw/liealgebra.hpp"
#include "nrw/model.hpp"

namespace nrw {

/// Parse a model object; a non-orthonormal SPD metric is absorbed into the
/// frame on ingestion (Cholesky), so the result is always orthonormal.
/// Throws Error("ParseError") on any malformed input.
InfinitesimalModel model_from_json(const nlohmann::json& j);
InfinitesimalModel load_model_file(const std::string& path);

/// Canonical model serialization: sorted keys, sorted 1-based index tuples,
/// shortest-round-trip floats; parse∘dump is byte-stable.
nlohmann::json model_to_json(const InfinitesimalModel& m);

/// Parse extension data; `base_override` replaces the file's "base" entry.
/// A "base" given as a string is resolved relative to `base_dir`.
ExtensionData extension_from_json(const nlohmann::json& j,
                                  std::optional<InfinitesimalModel> base_override,
                                  const std::string& base_dir);
ExtensionData load_extension_file(const std::string& path,
                                  std::optional<InfinitesimalModel> base_override = {});

nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json skew_basis_to_json(const std::vector<SkewMap>& basis);
nlohmann::json algebra_to_json(const GradedLieAlgebra& L);

/// Canonical dump with trailing newline.
std::string canonical_dump(const nlohmann::json& j);

/// Read a whole file; Error("ParseError") when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace nrw

#endif
