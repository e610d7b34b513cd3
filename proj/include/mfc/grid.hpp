#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mfc/model.hpp"

namespace mfc {

/// Tensor-product partition of a box into axis-aligned cells. Cells are
/// half-open on their upper faces except along the outer boundary, which
/// is closed, so every point of the box lies in exactly one cell.
/// Cell index is row-major over dimensions (last dimension fastest).
class StateGrid {
public:
    StateGrid() = default;
    /// boundaries[d] is the strictly increasing list of cut points along
    /// axis d, including both box ends. Representatives default to centers.
    explicit StateGrid(std::vector<Vec> boundaries,
                       std::optional<std::vector<Vec>> representatives = std::nullopt);

    static StateGrid uniform(const Box& box, std::span<const int> cells_per_dim);

    std::size_t size() const { return reps_.size(); }
    std::size_t dim() const { return boundaries_.size(); }
    const std::vector<Vec>& boundaries() const { return boundaries_; }
    const std::vector<Vec>& representatives() const { return reps_; }
    const Vec& representative(std::size_t cell) const { return reps_.at(cell); }
    Box bounds() const;
    Box cell_box(std::size_t cell) const;
    bool cell_contains(std::size_t cell, std::span<const double> x) const;

    /// Index of the unique cell containing x; Error(OutOfBounds) outside the box.
    std::size_t quantize(std::span<const double> x) const;
    /// Maximum Euclidean cell diameter.
    double L_X() const;

private:
    std::vector<Vec> boundaries_;
    std::vector<Vec> reps_;
    std::vector<std::size_t> strides_;
};

/// Finite action set used in place of the action box.
struct ActionGrid {
    std::vector<Vec> atoms;

    std::size_t size() const { return atoms.size(); }
    const Vec& atom(std::size_t k) const { return atoms.at(k); }
};

inline std::size_t quantize_state(const StateGrid& grid, std::span<const double> x) {
    return grid.quantize(x);
}

inline double compute_L_X(const StateGrid& grid) { return grid.L_X(); }

/// Points per axis in the dense search used by compute_L_U when the action
/// dimension exceeds one.
inline constexpr int kLUSearchResolution = 201;

/// sup over the action box of the distance to the nearest atom. Exact in
/// one dimension (endpoints and midpoints between sorted atoms); otherwise a
/// deterministic search over a kLUSearchResolution^m lattice plus the box
/// corners. Error(EmptyActionGrid) without atoms.
double compute_L_U(const ActionGrid& grid, const Box& action_box);

}  // namespace mfc
