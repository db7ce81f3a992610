#pragma once

// Newton polyhedra with orthant recession cone: support function, a partition
// of (N^x)^k into half-open unimodular cones, and the closed form Z(Delta).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motint/mot_class.hpp"

namespace motint {

using IntVec = std::vector<long>;

class NewtonPolyhedron {
 public:
  /// Throws Error(InvalidArgument) unless k >= 1, generators nonempty, every
  /// generator has length k and entries >= 1.
  NewtonPolyhedron(long k, std::vector<IntVec> generators);

  long k() const noexcept { return k_; }
  const std::vector<IntVec>& generators() const noexcept { return generators_; }
  /// Generators with duplicates and dominated points removed, sorted.
  const std::vector<IntVec>& vertices() const noexcept { return vertices_; }

  std::string to_string() const;

 private:
  long k_;
  std::vector<IntVec> generators_;
  std::vector<IntVec> vertices_;
};

/// {sum c_j rays[j] : c_j >= 1}; linear_value[j] = l(rays[j]).
struct HalfOpenCone {
  std::vector<IntVec> rays;
  IntVec linear_value;
  /// Lexicographically smallest generator attaining the minimum on the cone.
  IntVec witness;

  long value_at(const IntVec& coeffs) const;
  /// Coefficients c with xi = sum c_j rays[j], if xi lies in the cone.
  std::optional<IntVec> coordinates(const IntVec& xi) const;
};

/// min over generators of xi . v; xi must have entries >= 0.
long support_eval(const NewtonPolyhedron& delta, const IntVec& xi);

/// Throws Error(DimensionUnsupported) for k > 3.
std::vector<HalfOpenCone> linearity_partition(const NewtonPolyhedron& delta);

/// (L-1)^k sum_C prod_j 1/(L^{lambda_j} - 1). Throws for k > 3.
MotClass z_of_delta(const NewtonPolyhedron& delta);

/// Direct summation through completion order m.
CompletionExpansion z_truncated(const NewtonPolyhedron& delta, long m);

/// Parses "{ k = 2, generators = [[2,1],[1,3]] }".
NewtonPolyhedron parse_polyhedron(std::string_view text);

}  // namespace motint
