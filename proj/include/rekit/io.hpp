#pragma once

#include <string>

#include <json.hpp>

#include "rekit/eigen.hpp"
#include "rekit/frobenius.hpp"
#include "rekit/kernels.hpp"
#include "rekit/matrix.hpp"
#include "rekit/optimize.hpp"
#include "rekit/re.hpp"
#include "rekit/shape.hpp"
#include "rekit/symmetrize.hpp"

namespace rekit::io {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Matrix from JSON ({"n", "entries", "weights"?}, entries flat or nested)
/// or CSV (one row per line, weights defaulting to 1). Dispatch on extension.
NextGenMatrix load_matrix(const std::string& path);
NextGenMatrix matrix_from_json(const ordered_json& j);

/// Strategy from JSON ({"eta": [...]} or a bare array) or a CSV line/column.
Strategy load_strategy(const std::string& path);

/// Plain numeric vector (cost weights etc.), same formats as load_strategy
/// minus the [0,1] validation.
std::vector<double> load_vector(const std::string& path);

/// Built-in fixture matrices, addressable from the CLI as @name.
/// Names: counter-conv, counter-conc, friedland.
NextGenMatrix builtin_matrix(const std::string& name);

/// Kernel + grid from a parameter JSON ({"family": ..., ...}) or a tabulated
/// values matrix ({"tabulated": [[...]]}); see the README for the families.
struct KernelBundle {
  KernelSpec kernel;
  QuadratureGrid grid;
};
KernelBundle kernel_from_json(const ordered_json& j, int default_grid = 128);

ordered_json to_json(const Spectrum& s);
ordered_json to_json(const Inertia& in);
ordered_json to_json(const PerronPair& pp);
ordered_json to_json(const NextGenMatrix& m);
ordered_json to_json(const SymmetrizeResult& r);
ordered_json to_json(const SymmetrizationCertificate& c);
ordered_json to_json(const ReReport& r);
ordered_json to_json(const PropertyReport& r);
ordered_json to_json(const InvarianceReport& r);
ordered_json to_json(const AtomDecomposition& d);
ordered_json to_json(const MonatomicEvidence& e);
ordered_json to_json(const ShapeViolation& v);
ordered_json to_json(const ShapeVerdict& v);
ordered_json to_json(const SecondDerivativeReport& r);
ordered_json to_json(const OptimizationResult& r);

std::string shape_class_name(ShapeClass c);
std::string method_name(OptimMethod m);

/// Wraps a payload with the versioned envelope {"schema_version": ..., ...}.
ordered_json envelope(const std::string& kind, ordered_json payload);

}  // namespace rekit::io
