#include "mfc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfc/error.hpp"

namespace mfc {

StateGrid::StateGrid(std::vector<Vec> boundaries, std::optional<std::vector<Vec>> representatives)
    : boundaries_(std::move(boundaries)) {
    if (boundaries_.empty()) throw Error(ErrorKind::InvalidArgument, "grid needs at least one axis");
    std::size_t total = 1;
    for (const auto& b : boundaries_) {
        if (b.size() < 2) throw Error(ErrorKind::InvalidArgument, "axis needs at least one cell");
        for (std::size_t i = 1; i < b.size(); ++i)
            if (!(b[i] > b[i - 1]))
                throw Error(ErrorKind::InvalidArgument, "cell boundaries must strictly increase");
        total *= b.size() - 1;
    }
    strides_.assign(boundaries_.size(), 1);
    for (std::size_t d = boundaries_.size() - 1; d-- > 0;)
        strides_[d] = strides_[d + 1] * (boundaries_[d + 1].size() - 1);

    if (representatives) {
        if (representatives->size() != total)
            throw Error(ErrorKind::InvalidArgument, "one representative per cell required");
        reps_ = std::move(*representatives);
        for (std::size_t c = 0; c < total; ++c)
            if (!cell_contains(c, reps_[c]))
                throw Error(ErrorKind::InvalidArgument,
                            "representative " + std::to_string(c) + " lies outside its cell");
    } else {
        reps_.resize(total);
        for (std::size_t c = 0; c < total; ++c) {
            const Box b = cell_box(c);
            Vec center(dim());
            for (std::size_t d = 0; d < dim(); ++d) center[d] = 0.5 * (b.lower[d] + b.upper[d]);
            reps_[c] = std::move(center);
        }
    }
}

StateGrid StateGrid::uniform(const Box& box, std::span<const int> cells_per_dim) {
    if (cells_per_dim.size() != box.dim())
        throw Error(ErrorKind::InvalidArgument, "cells_per_dim must match the box dimension");
    std::vector<Vec> boundaries(box.dim());
    for (std::size_t d = 0; d < box.dim(); ++d) {
        const int m = cells_per_dim[d];
        if (m < 1) throw Error(ErrorKind::InvalidArgument, "cells per axis must be >= 1");
        Vec& b = boundaries[d];
        b.resize(static_cast<std::size_t>(m) + 1);
        const double width = box.upper[d] - box.lower[d];
        for (int i = 0; i <= m; ++i) b[i] = box.lower[d] + width * i / m;
        b.back() = box.upper[d];
    }
    return StateGrid(std::move(boundaries));
}

Box StateGrid::bounds() const {
    Box b;
    for (const auto& axis : boundaries_) {
        b.lower.push_back(axis.front());
        b.upper.push_back(axis.back());
    }
    return b;
}

Box StateGrid::cell_box(std::size_t cell) const {
    Box b;
    std::size_t rest = cell;
    for (std::size_t d = 0; d < dim(); ++d) {
        const std::size_t i = rest / strides_[d];
        rest %= strides_[d];
        b.lower.push_back(boundaries_[d][i]);
        b.upper.push_back(boundaries_[d][i + 1]);
    }
    return b;
}

bool StateGrid::cell_contains(std::size_t cell, std::span<const double> x) const {
    if (x.size() != dim()) return false;
    std::size_t rest = cell;
    for (std::size_t d = 0; d < dim(); ++d) {
        const std::size_t i = rest / strides_[d];
        rest %= strides_[d];
        const Vec& b = boundaries_[d];
        const bool last = i + 2 == b.size();
        if (!(x[d] >= b[i])) return false;
        if (last ? !(x[d] <= b[i + 1]) : !(x[d] < b[i + 1])) return false;
    }
    return true;
}

std::size_t StateGrid::quantize(std::span<const double> x) const {
    if (x.size() != dim())
        throw Error(ErrorKind::InvalidArgument, "point dimension does not match the grid");
    std::size_t index = 0;
    for (std::size_t d = 0; d < dim(); ++d) {
        const Vec& b = boundaries_[d];
        if (!(x[d] >= b.front() && x[d] <= b.back()))
            throw Error(ErrorKind::OutOfBounds,
                        "coordinate " + std::to_string(x[d]) + " outside [" +
                            std::to_string(b.front()) + ", " + std::to_string(b.back()) + "]");
        // first boundary strictly greater than x, minus one; the top face
        // belongs to the last cell
        auto it = std::upper_bound(b.begin(), b.end(), x[d]);
        std::size_t i = static_cast<std::size_t>(it - b.begin());
        i = i == 0 ? 0 : i - 1;
        i = std::min(i, b.size() - 2);
        index += i * strides_[d];
    }
    return index;
}

double StateGrid::L_X() const {
    double best = 0.0;
    for (std::size_t c = 0; c < size(); ++c) {
        const Box b = cell_box(c);
        double sq = 0.0;
        for (std::size_t d = 0; d < dim(); ++d) sq += (b.upper[d] - b.lower[d]) * (b.upper[d] - b.lower[d]);
        best = std::max(best, std::sqrt(sq));
    }
    return best;
}

namespace {

double nearest_atom_distance(const ActionGrid& grid, const Vec& u) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : grid.atoms) {
        double sq = 0.0;
        for (std::size_t d = 0; d < u.size(); ++d) sq += (u[d] - a[d]) * (u[d] - a[d]);
        best = std::min(best, sq);
    }
    return std::sqrt(best);
}

}  // namespace

double compute_L_U(const ActionGrid& grid, const Box& action_box) {
    if (grid.atoms.empty()) throw Error(ErrorKind::EmptyActionGrid, "no action atoms");
    const std::size_t m = action_box.dim();
    for (const auto& a : grid.atoms)
        if (a.size() != m) throw Error(ErrorKind::InvalidArgument, "atom dimension mismatch");
    if (m == 0) return 0.0;

    if (m == 1) {
        Vec pts;
        for (const auto& a : grid.atoms) pts.push_back(a[0]);
        std::sort(pts.begin(), pts.end());
        const double lo = action_box.lower[0], hi = action_box.upper[0];
        // candidate maximizers: box ends and midpoints between consecutive atoms
        double best = std::max(nearest_atom_distance(grid, {lo}), nearest_atom_distance(grid, {hi}));
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double mid = 0.5 * (pts[i - 1] + pts[i]);
            if (mid >= lo && mid <= hi) best = std::max(best, 0.5 * (pts[i] - pts[i - 1]));
        }
        return best;
    }

    double best = 0.0;
    std::vector<int> idx(m, 0);
    const int res = kLUSearchResolution;
    for (;;) {
        Vec u(m);
        for (std::size_t d = 0; d < m; ++d)
            u[d] = action_box.lower[d] + (action_box.upper[d] - action_box.lower[d]) * idx[d] / (res - 1);
        best = std::max(best, nearest_atom_distance(grid, u));
        std::size_t d = m;
        while (d-- > 0) {
            if (++idx[d] < res) break;
            idx[d] = 0;
        }
        if (d == static_cast<std::size_t>(-1)) break;
    }
    return best;
}

}  // namespace mfc
