#pragma once

#include <vector>

#include "bladegauge/field.hpp"

namespace bladegauge {

/// Node layout shared by tabulated fields and lattices: a non-periodic axis
/// has cells + 1 nodes from lower to upper, a periodic one `cells` nodes
/// (upper is identified with lower). Flat indices run row-major, last axis
/// fastest.
std::vector<int> node_shape(const std::vector<GridAxis>& axes);
std::size_t node_count(const std::vector<GridAxis>& axes);
Point node_position(const std::vector<GridAxis>& axes, std::size_t flat);

/// Tensor-product cubic spline through samples at the nodes: natural end
/// conditions on open axes, periodic splines on periodic ones. The result
/// is C^2 with analytic jets up to second order, and reproduces products of
/// linear functions exactly. On an open axis it extrapolates up to one cell
/// past either end and throws DomainError beyond that.
template <typename T>
Field<T> tabulated_field(const std::vector<GridAxis>& axes, const std::vector<T>& samples);

extern template Field<double> tabulated_field(const std::vector<GridAxis>&, const std::vector<double>&);
extern template Field<CMatrix> tabulated_field(const std::vector<GridAxis>&, const std::vector<CMatrix>&);
extern template Field<RMatrix> tabulated_field(const std::vector<GridAxis>&, const std::vector<RMatrix>&);

}  // namespace bladegauge
