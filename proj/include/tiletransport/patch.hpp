#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tiletransport/systems.hpp"

namespace tiletransport {

/// A placed prototile: 1-D tiles carry an exact left endpoint, 2-D tiles
/// an integer lattice anchor.
struct Tile {
    int proto = 0;
    Scalar x;      // 1-D left endpoint
    IVec pos;      // 2-D anchor
};

/// Oriented codim-1 cell. The canonical normal points along +axis
/// (axis 0: +x, axis 1: +y). tile_lo sits on the negative side (the
/// normal leaves it, outward sign +1), tile_hi on the positive side
/// (sign -1); -1 marks the patch exterior.
struct Face {
    int axis = 0;
    IVec corner;    // 2-D: SW corner of the unit edge
    Scalar x;       // 1-D: vertex coordinate
    int tile_lo = -1;
    int tile_hi = -1;
    bool boundary() const { return tile_lo < 0 || tile_hi < 0; }
};

/// Exact radius usable in both dimensions: 1-D code compares lengths
/// against `linear`, 2-D code compares squared distances against
/// `squared`. `approx` is for reporting only.
struct Radius {
    double approx = 0.0;
    Scalar linear;
    Rational squared;
    int grid_index = -1;

    static Radius from_double(double r) {
        if (r < 0) fail(ErrorCode::BadArgument, "negative radius");
        Radius out;
        out.approx = r;
        Rational rr = rational_from_double(r);
        out.linear = Scalar(rr);
        out.squared = rr * rr;
        return out;
    }
    static Radius from_scalar(const Scalar& r) {
        Radius out;
        out.approx = r.to_double();
        out.linear = r;
        out.squared = Rational(0);  // unused: scalar radii are 1-D only
        return out;
    }
    /// k multiples of half the system's maximum tile diameter.
    static Radius grid(const TilingSystem& sys, int k) {
        Radius out;
        out.grid_index = k;
        if (sys.dimension == 1) {
            out.linear = Scalar(make_rational(k, 2)) * sys.max_tile_diameter_1d();
            out.approx = out.linear.to_double();
        } else {
            out.squared = Rational(BigInt(k) * BigInt(k)) * sys.max_tile_diameter_sq() /
                          Rational(4);
            out.approx = std::sqrt(to_double(out.squared));
        }
        return out;
    }
};

namespace detail {
inline std::uint64_t pack_cell(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
}
} // namespace detail

/// A finite, connected, non-overlapping set of tiles together with its
/// derived cell complex. Immutable after construction.
class Patch {
public:
    Patch() : system_(&TilingSystem::fibonacci()) {}

    static Patch from_tiles(const TilingSystem& sys, std::vector<Tile> tiles) {
        Patch p;
        p.system_ = &sys;
        p.tiles_ = std::move(tiles);
        p.build();
        return p;
    }

    const TilingSystem& system() const { return *system_; }
    int dimension() const { return system_->dimension; }
    bool empty() const { return tiles_.empty(); }
    int tile_count() const { return static_cast<int>(tiles_.size()); }
    const std::vector<Tile>& tiles() const { return tiles_; }
    const std::vector<Face>& faces() const { return faces_; }

    /// (face index, outward sign) pairs for one tile.
    const std::vector<std::pair<int, int>>& tile_faces(int tile) const {
        return tile_faces_.at(tile);
    }

    /// 2-D lattice corners of the complex (0-cells). 1-D 0-cells are the
    /// faces themselves.
    const std::vector<IVec>& vertices2d() const { return vertices_; }

    // --- reference points (tile centroids) -------------------------------
    Scalar centroid_x(int tile) const {
        const Tile& t = tiles_[tile];
        const Prototile& p = system_->prototile(t.proto);
        if (dimension() == 1) return t.x + p.centroid_x();
        return Scalar(Rational(BigInt(t.pos.x))) + p.centroid_x();
    }
    Scalar centroid_y(int tile) const {
        const Tile& t = tiles_[tile];
        if (dimension() == 1) return Scalar(0);
        return Scalar(Rational(BigInt(t.pos.y))) + system_->prototile(t.proto).centroid_y();
    }
    /// 2-D centroid scaled by kCentroidScale, exactly integer.
    static constexpr std::int64_t kCentroidScale = 6;
    IVec centroid_scaled(int tile) const {
        const Tile& t = tiles_[tile];
        return {kCentroidScale * t.pos.x + centroid_offset_scaled_[t.proto].x,
                kCentroidScale * t.pos.y + centroid_offset_scaled_[t.proto].y};
    }

    double tile_distance(int i, int j) const {
        if (dimension() == 1) return (centroid_x(i) - centroid_x(j)).abs().to_double();
        IVec a = centroid_scaled(i), b = centroid_scaled(j);
        double dx = double(a.x - b.x), dy = double(a.y - b.y);
        return std::sqrt(dx * dx + dy * dy) / double(kCentroidScale);
    }

    /// Exact test: centroid distance(i, j) <= r.
    bool tiles_within(int i, int j, const Radius& r) const {
        if (dimension() == 1) return (centroid_x(i) - centroid_x(j)).abs() <= r.linear;
        IVec a = centroid_scaled(i), b = centroid_scaled(j);
        std::int64_t dx = a.x - b.x, dy = a.y - b.y;
        // dist^2 <= r^2  <=>  scaled_dist^2 <= scale^2 r^2, both exact.
        Rational lhs(BigInt(dx * dx + dy * dy));
        return lhs <= Rational(BigInt(kCentroidScale * kCentroidScale)) * r.squared;
    }

    /// Exact squared centroid distances scaled by kCentroidScale^2 (2-D).
    std::int64_t centroid_dist_sq_scaled(int i, int j) const {
        IVec a = centroid_scaled(i), b = centroid_scaled(j);
        std::int64_t dx = a.x - b.x, dy = a.y - b.y;
        return dx * dx + dy * dy;
    }

    /// Distance from a tile's centroid to the patch boundary, compared
    /// against `band` exactly.
    bool tile_near_boundary(int tile, const Radius& band) const {
        if (dimension() == 1) {
            Scalar c = centroid_x(tile);
            return (c - min_x_) <= band.linear || (max_x_ - c) <= band.linear;
        }
        Rational d2(BigInt(boundary_dist_sq_scaled(tile)));
        return d2 <= Rational(BigInt(kCentroidScale * kCentroidScale)) * band.squared;
    }

    /// Squared distance (scaled by kCentroidScale^2) from the centroid of
    /// `tile` to the nearest boundary face. 2-D only.
    std::int64_t boundary_dist_sq_scaled(int tile) const {
        IVec c = centroid_scaled(tile);
        std::int64_t best = INT64_MAX;
        for (int f : boundary_faces_) {
            const Face& face = faces_[f];
            // segment endpoints scaled
            std::int64_t ax = kCentroidScale * face.corner.x;
            std::int64_t ay = kCentroidScale * face.corner.y;
            std::int64_t bx = ax + (face.axis == 0 ? 0 : kCentroidScale);
            std::int64_t by = ay + (face.axis == 0 ? kCentroidScale : 0);
            std::int64_t d = point_segment_dist_sq(c.x, c.y, ax, ay, bx, by);
            best = std::min(best, d);
        }
        return best;
    }

    // --- 1-D helpers ------------------------------------------------------
    const Scalar& min_x() const { return min_x_; }
    const Scalar& max_x() const { return max_x_; }
    Scalar length() const { return max_x_ - min_x_; }

    // --- 2-D helpers ------------------------------------------------------
    int tile_at_cell(std::int64_t x, std::int64_t y) const {
        auto it = cell_to_tile_.find(detail::pack_cell(x, y));
        return it == cell_to_tile_.end() ? -1 : it->second;
    }
    int face_index(int axis, IVec corner) const {
        auto it = face_index_.find(face_key(axis, corner));
        return it == face_index_.end() ? -1 : it->second;
    }
    void bounds2d(IVec& lo, IVec& hi) const { lo = lo_; hi = hi_; }

    const std::vector<int>& boundary_faces() const { return boundary_faces_; }

    /// Patch diameter (upper bound), used to cap radius searches.
    double diameter_bound() const {
        if (dimension() == 1) return length().to_double();
        double w = double(hi_.x - lo_.x), h = double(hi_.y - lo_.y);
        return std::sqrt(w * w + h * h);
    }

    Patch translated(const Scalar& dx) const {
        if (dimension() != 1) fail(ErrorCode::BadArgument, "scalar translate is 1-D only");
        std::vector<Tile> moved = tiles_;
        for (Tile& t : moved) t.x += dx;
        return from_tiles(*system_, std::move(moved));
    }
    Patch translated(IVec d) const {
        if (dimension() != 2) fail(ErrorCode::BadArgument, "lattice translate is 2-D only");
        std::vector<Tile> moved = tiles_;
        for (Tile& t : moved) t.pos = t.pos + d;
        return from_tiles(*system_, std::move(moved));
    }

    /// Sub-patch on a subset of tile indices (revalidates connectivity).
    Patch restricted(const std::vector<int>& keep) const {
        std::vector<Tile> sub;
        sub.reserve(keep.size());
        for (int i : keep) sub.push_back(tiles_.at(i));
        return from_tiles(*system_, std::move(sub));
    }

private:
    static std::int64_t point_segment_dist_sq(std::int64_t px, std::int64_t py,
                                              std::int64_t ax, std::int64_t ay,
                                              std::int64_t bx, std::int64_t by) {
        // axis-aligned segments: clamp per coordinate
        std::int64_t qx = std::clamp(px, std::min(ax, bx), std::max(ax, bx));
        std::int64_t qy = std::clamp(py, std::min(ay, by), std::max(ay, by));
        return (px - qx) * (px - qx) + (py - qy) * (py - qy);
    }

    static std::uint64_t face_key(int axis, IVec corner) {
        // axis bit folded into x parity headroom: shift x left by 1
        return detail::pack_cell(corner.x * 2 + axis, corner.y);
    }

    void build() {
        if (dimension() == 1) build1d(); else build2d();
        tile_faces_.assign(tiles_.size(), {});
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
            if (faces_[f].tile_lo >= 0) tile_faces_[faces_[f].tile_lo].push_back({f, +1});
            if (faces_[f].tile_hi >= 0) tile_faces_[faces_[f].tile_hi].push_back({f, -1});
            if (faces_[f].boundary()) boundary_faces_.push_back(f);
        }
        centroid_offset_scaled_.clear();
        for (const Prototile& p : system_->prototiles) {
            if (dimension() == 2) {
                Rational cx = p.centroid_x().rational_part() * kCentroidScale;
                Rational cy = p.centroid_y().rational_part() * kCentroidScale;
                if (denominator(cx) != 1 || denominator(cy) != 1)
                    fail(ErrorCode::Overflow, "centroid scale too coarse for prototile");
                centroid_offset_scaled_.push_back(
                    {numerator(cx).convert_to<std::int64_t>(),
                     numerator(cy).convert_to<std::int64_t>()});
            } else {
                centroid_offset_scaled_.push_back({0, 0});
            }
        }
    }

    void build1d() {
        std::sort(tiles_.begin(), tiles_.end(),
                  [](const Tile& a, const Tile& b) { return a.x < b.x; });
        faces_.clear();
        if (tiles_.empty()) { min_x_ = max_x_ = Scalar(0); return; }
        Scalar cursor = tiles_.front().x;
        min_x_ = cursor;
        for (int i = 0; i < tile_count(); ++i) {
            if (!(tiles_[i].x == cursor))
                fail(ErrorCode::InvalidPatch, "1-D tiles overlap or leave a gap");
            Face f;
            f.axis = 0;
            f.x = cursor;
            f.tile_lo = i - 1;
            f.tile_hi = i;
            faces_.push_back(f);
            cursor += system_->prototile(tiles_[i].proto).length;
        }
        Face last;
        last.axis = 0;
        last.x = cursor;
        last.tile_lo = tile_count() - 1;
        last.tile_hi = -1;
        faces_.push_back(last);
        max_x_ = cursor;
    }

    void build2d() {
        cell_to_tile_.clear();
        cell_to_tile_.reserve(tiles_.size() * 4);
        lo_ = {INT64_MAX, INT64_MAX};
        hi_ = {INT64_MIN, INT64_MIN};
        for (int i = 0; i < tile_count(); ++i) {
            const Tile& t = tiles_[i];
            for (const IVec& c : system_->prototile(t.proto).cells) {
                IVec cell = c + t.pos;
                if (!cell_to_tile_.emplace(detail::pack_cell(cell.x, cell.y), i).second)
                    fail(ErrorCode::InvalidPatch, "tile interiors overlap");
                lo_.x = std::min(lo_.x, cell.x);
                lo_.y = std::min(lo_.y, cell.y);
                hi_.x = std::max(hi_.x, cell.x + 1);
                hi_.y = std::max(hi_.y, cell.y + 1);
            }
        }
        if (tiles_.empty()) { lo_ = hi_ = {0, 0}; }
        check_connected();
        faces_.clear();
        face_index_.clear();
        std::unordered_set<std::uint64_t> seen_vertices;
        vertices_.clear();
        auto add_face = [&](int axis, IVec corner, int lo, int hi) {
            face_index_.emplace(face_key(axis, corner), static_cast<int>(faces_.size()));
            Face f;
            f.axis = axis;
            f.corner = corner;
            f.tile_lo = lo;
            f.tile_hi = hi;
            faces_.push_back(f);
        };
        for (const auto& [key, tile] : cell_to_tile_) {
            auto x = static_cast<std::int32_t>(key >> 32);
            auto y = static_cast<std::int32_t>(key & 0xffffffffu);
            IVec cell{x, y};
            int west = tile_at_cell(cell.x - 1, cell.y);
            int east = tile_at_cell(cell.x + 1, cell.y);
            int south = tile_at_cell(cell.x, cell.y - 1);
            int north = tile_at_cell(cell.x, cell.y + 1);
            if (west != tile) add_face(0, cell, west, tile);
            if (east < 0) add_face(0, {cell.x + 1, cell.y}, tile, -1);
            if (south != tile) add_face(1, cell, south, tile);
            if (north < 0) add_face(1, {cell.x, cell.y + 1}, tile, -1);
            for (std::int64_t dx = 0; dx <= 1; ++dx)
                for (std::int64_t dy = 0; dy <= 1; ++dy)
                    if (seen_vertices.insert(detail::pack_cell(cell.x + dx, cell.y + dy)).second)
                        vertices_.push_back({cell.x + dx, cell.y + dy});
        }
        std::sort(vertices_.begin(), vertices_.end());
    }

    void check_connected() const {
        if (cell_to_tile_.empty()) return;
        std::unordered_set<std::uint64_t> seen;
        std::deque<IVec> queue;
        auto first = cell_to_tile_.begin()->first;
        IVec start{static_cast<std::int32_t>(first >> 32),
                   static_cast<std::int32_t>(first & 0xffffffffu)};
        queue.push_back(start);
        seen.insert(detail::pack_cell(start.x, start.y));
        while (!queue.empty()) {
            IVec c = queue.front();
            queue.pop_front();
            const IVec steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (IVec s : steps) {
                IVec n = c + s;
                auto key = detail::pack_cell(n.x, n.y);
                if (cell_to_tile_.count(key) && seen.insert(key).second) queue.push_back(n);
            }
        }
        if (seen.size() != cell_to_tile_.size())
            fail(ErrorCode::InvalidPatch, "patch is not connected");
    }

    const TilingSystem* system_;
    std::vector<Tile> tiles_;
    std::vector<Face> faces_;
    std::vector<std::vector<std::pair<int, int>>> tile_faces_;
    std::vector<int> boundary_faces_;
    std::vector<IVec> vertices_;
    std::vector<IVec> centroid_offset_scaled_;
    // 1-D extent
    Scalar min_x_, max_x_;
    // 2-D cell complex
    std::unordered_map<std::uint64_t, int> cell_to_tile_;
    std::unordered_map<std::uint64_t, int> face_index_;
    IVec lo_{0, 0}, hi_{0, 0};
};

/// level-fold substitution of a prototile, anchored at the origin.
inline Patch supertile(const TilingSystem& sys, int proto, int level) {
    if (level < 0) fail(ErrorCode::BadArgument, "negative supertile level");
    sys.prototile(proto);
    std::vector<Tile> current;
    Tile seed;
    seed.proto = proto;
    current.push_back(seed);
    for (int m = 0; m < level; ++m) {
        std::vector<Tile> next;
        next.reserve(current.size() * sys.rule.images[0].size());
        for (const Tile& t : current) {
            for (const SubstitutionChild& ch : sys.rule.images[t.proto]) {
                Tile child;
                child.proto = ch.proto;
                if (sys.dimension == 1)
                    child.x = sys.rule.inflation * t.x + ch.offset1d;
                else
                    child.pos = 2 * t.pos + ch.offset2d;
                next.push_back(std::move(child));
            }
        }
        current.swap(next);
    }
    return Patch::from_tiles(sys, std::move(current));
}

inline Patch supertile(const TilingSystem& sys, const std::string& label, int level) {
    return supertile(sys, sys.proto_by_label(label), level);
}

/// (n-1)-dimensional measure of the patch boundary: boundary vertices in
/// 1-D, unit boundary edges in 2-D.
inline Scalar boundary_measure(const Patch& patch) {
    return Scalar(Rational(BigInt(patch.boundary_faces().size())));
}

/// Tile-adjacency graph: one node per tile, one edge per adjacent tile
/// pair carrying the shared face measure and the centroid distance.
struct FaceGraphEdge {
    int u = 0;
    int v = 0;
    Scalar measure;       // total measure of shared faces
    double distance = 0;  // between tile reference points
};
struct FaceGraph {
    int nodes = 0;
    std::vector<FaceGraphEdge> edges;
};

inline FaceGraph adjacency(const Patch& patch) {
    FaceGraph g;
    g.nodes = patch.tile_count();
    std::map<std::pair<int, int>, Scalar> shared;
    for (const Face& f : patch.faces()) {
        if (f.boundary()) continue;
        auto key = std::minmax(f.tile_lo, f.tile_hi);
        auto [it, fresh] = shared.try_emplace({key.first, key.second}, Scalar(0));
        it->second += Scalar(1);
    }
    for (const auto& [pair, measure] : shared)
        g.edges.push_back({pair.first, pair.second, measure,
                           patch.tile_distance(pair.first, pair.second)});
    return g;
}

/// Combinatorial multiset of supertiles with a declared boundary
/// measure; used for families like the chair R_n regions that have no
/// pinned planar placement.
struct RegionPart {
    int proto = 0;
    int level = 0;
    long long count = 0;
};
struct RegionSpec {
    std::string descriptor;
    std::vector<RegionPart> parts;
    Scalar declared_boundary;

    void validate(const TilingSystem& sys) const {
        for (const RegionPart& p : parts) {
            sys.prototile(p.proto);
            if (p.count <= 0) fail(ErrorCode::BadArgument, "region part count must be positive");
            if (p.level < 0) fail(ErrorCode::BadArgument, "region part level must be >= 0");
        }
        if (!(declared_boundary > Scalar(0)))
            fail(ErrorCode::BadArgument, "declared boundary must be positive");
    }
};

/// The chair R_n family: one (n-1)-supertile, three (n-2)-supertiles,
/// seven (n-3)-supertiles, ..., 2^n - 1 single tiles, all of type NE,
/// with declared boundary 4 * 2^n.
inline RegionSpec chair_partial_region(int n) {
    if (n < 1) fail(ErrorCode::BadArgument, "chair partial region needs n >= 1");
    const TilingSystem& sys = TilingSystem::chair();
    RegionSpec spec;
    spec.descriptor = "R_" + std::to_string(n);
    int ne = sys.proto_by_label("NE");
    for (int k = 1; k <= n; ++k)
        spec.parts.push_back({ne, n - k, (1LL << k) - 1});
    spec.declared_boundary = Scalar(Rational(BigInt(4) * (BigInt(1) << n)));
    spec.validate(sys);
    return spec;
}

} // namespace tiletransport
