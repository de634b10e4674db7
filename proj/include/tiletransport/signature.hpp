#pragma once

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "tiletransport/patch.hpp"

namespace tiletransport {

/// Reference to a cell of the complex. In 1-D the vertices are the
/// codim-1 faces, so Vertex and FaceCell coincide there.
struct CellRef {
    enum Kind { TileCell = 0, FaceCell = 1, VertexCell = 2 };
    Kind kind = TileCell;
    int index = 0;

    static CellRef tile(int i) { return {TileCell, i}; }
    static CellRef face(int i) { return {FaceCell, i}; }
    static CellRef vertex(int i) { return {VertexCell, i}; }
};

/// Canonical, translation-invariant encoding of the tile pattern within
/// a closed ball around a cell's anchor point: the sorted list of
/// (prototile, anchor offset) pairs of every tile meeting the ball, in
/// exact coordinates, together with the cell's own kind and orientation.
struct Signature {
    int dimension = 1;
    int kind = 0;        // CellRef::Kind
    int axis = 0;        // face orientation class; 0 otherwise
    Scalar radius_key;   // 1-D: radius; 2-D: radius squared (as rational)
    std::vector<std::pair<int, std::pair<Scalar, Scalar>>> entries;

    friend bool operator==(const Signature& a, const Signature& b) {
        if (std::tie(a.dimension, a.kind, a.axis) != std::tie(b.dimension, b.kind, b.axis))
            return false;
        if (!(a.radius_key == b.radius_key)) return false;
        if (a.entries.size() != b.entries.size()) return false;
        for (size_t i = 0; i < a.entries.size(); ++i) {
            if (a.entries[i].first != b.entries[i].first) return false;
            if (!(a.entries[i].second.first == b.entries[i].second.first)) return false;
            if (!(a.entries[i].second.second == b.entries[i].second.second)) return false;
        }
        return true;
    }
    friend bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }

    friend bool operator<(const Signature& a, const Signature& b) {
        if (a.dimension != b.dimension) return a.dimension < b.dimension;
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.axis != b.axis) return a.axis < b.axis;
        if (!(a.radius_key == b.radius_key)) return a.radius_key < b.radius_key;
        if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size();
        for (size_t i = 0; i < a.entries.size(); ++i) {
            const auto& ea = a.entries[i];
            const auto& eb = b.entries[i];
            if (ea.first != eb.first) return ea.first < eb.first;
            if (!(ea.second.first == eb.second.first)) return ea.second.first < eb.second.first;
            if (!(ea.second.second == eb.second.second))
                return ea.second.second < eb.second.second;
        }
        return false;
    }
};

namespace detail {

/// Anchor point of a cell (exact coordinates).
inline std::pair<Scalar, Scalar> cell_anchor(const Patch& patch, CellRef cell) {
    switch (cell.kind) {
        case CellRef::TileCell:
            return {patch.centroid_x(cell.index), patch.centroid_y(cell.index)};
        case CellRef::FaceCell: {
            const Face& f = patch.faces().at(cell.index);
            if (patch.dimension() == 1) return {f.x, Scalar(0)};
            Scalar half(make_rational(1, 2));
            Scalar cx(Rational(BigInt(f.corner.x)));
            Scalar cy(Rational(BigInt(f.corner.y)));
            return f.axis == 0 ? std::pair<Scalar, Scalar>{cx, cy + half}
                               : std::pair<Scalar, Scalar>{cx + half, cy};
        }
        case CellRef::VertexCell: {
            if (patch.dimension() == 1) {
                const Face& f = patch.faces().at(cell.index);
                return {f.x, Scalar(0)};
            }
            const IVec& v = patch.vertices2d().at(cell.index);
            return {Scalar(Rational(BigInt(v.x))), Scalar(Rational(BigInt(v.y)))};
        }
    }
    fail(ErrorCode::BadArgument, "bad cell kind");
}

/// Squared distance from a rational point to a unit cell (as a box).
inline Rational point_cell_dist_sq(const Rational& px, const Rational& py, IVec cell) {
    auto clampdist = [](const Rational& p, std::int64_t lo) -> Rational {
        Rational lo_r{BigInt(lo)}, hi_r{BigInt(lo + 1)};
        if (p < lo_r) return Rational(lo_r - p);
        if (p > hi_r) return Rational(p - hi_r);
        return Rational(0);
    };
    Rational dx = clampdist(px, cell.x);
    Rational dy = clampdist(py, cell.y);
    return dx * dx + dy * dy;
}

} // namespace detail

/// Indices of all tiles whose closure meets the closed ball of radius R
/// around the cell anchor. Throws InsufficientCollar unless the ball is
/// entirely covered by the patch.
inline std::vector<int> tiles_meeting_ball(const Patch& patch, CellRef cell,
                                           const Radius& radius) {
    auto [ax, ay] = detail::cell_anchor(patch, cell);
    std::vector<int> out;
    if (patch.dimension() == 1) {
        Scalar lo = ax - radius.linear, hi = ax + radius.linear;
        if (lo < patch.min_x() || hi > patch.max_x())
            fail(ErrorCode::InsufficientCollar, "ball extends past the patch");
        for (int i = 0; i < patch.tile_count(); ++i) {
            const Tile& t = patch.tiles()[i];
            Scalar right = t.x + patch.system().prototile(t.proto).length;
            if (t.x <= hi && right >= lo) out.push_back(i);
        }
        return out;
    }
    const Rational px = ax.rational_part();
    const Rational py = ay.rational_part();
    double r_up = std::sqrt(to_double(radius.squared)) + 1e-9;
    auto lo_x = static_cast<std::int64_t>(std::floor(to_double(px) - r_up)) - 1;
    auto hi_x = static_cast<std::int64_t>(std::ceil(to_double(px) + r_up)) + 1;
    auto lo_y = static_cast<std::int64_t>(std::floor(to_double(py) - r_up)) - 1;
    auto hi_y = static_cast<std::int64_t>(std::ceil(to_double(py) + r_up)) + 1;
    std::vector<char> taken(patch.tile_count(), 0);
    for (std::int64_t x = lo_x; x < hi_x; ++x)
        for (std::int64_t y = lo_y; y < hi_y; ++y) {
            if (detail::point_cell_dist_sq(px, py, {x, y}) > radius.squared) continue;
            int tile = patch.tile_at_cell(x, y);
            if (tile < 0)
                fail(ErrorCode::InsufficientCollar, "ball extends past the patch");
            if (!taken[tile]) {
                taken[tile] = 1;
                out.push_back(tile);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Signature of the pattern within radius R of the cell's anchor.
/// Equal signatures <=> equal closed R-neighborhoods up to translation.
inline Signature collar_signature(const Patch& patch, CellRef cell, const Radius& radius) {
    Signature sig;
    sig.dimension = patch.dimension();
    sig.kind = cell.kind;
    sig.axis = cell.kind == CellRef::FaceCell ? patch.faces().at(cell.index).axis : 0;
    sig.radius_key = patch.dimension() == 1 ? radius.linear : Scalar(radius.squared);
    auto [ax, ay] = detail::cell_anchor(patch, cell);
    for (int tile : tiles_meeting_ball(patch, cell, radius)) {
        const Tile& t = patch.tiles()[tile];
        Scalar tx = patch.dimension() == 1 ? t.x : Scalar(Rational(BigInt(t.pos.x)));
        Scalar ty = patch.dimension() == 1 ? Scalar(0) : Scalar(Rational(BigInt(t.pos.y)));
        sig.entries.push_back({t.proto, {tx - ax, ty - ay}});
    }
    std::sort(sig.entries.begin(), sig.entries.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  if (!(a.second.first == b.second.first)) return a.second.first < b.second.first;
                  return a.second.second < b.second.second;
              });
    return sig;
}

inline Signature collar_signature(const Patch& patch, CellRef cell, double radius) {
    return collar_signature(patch, cell, Radius::from_double(radius));
}

} // namespace tiletransport
