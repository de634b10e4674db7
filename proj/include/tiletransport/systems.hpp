#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tiletransport/scalar.hpp"

namespace tiletransport {

/// Integer lattice vector (2-D tile translations and unit cells).
struct IVec {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend IVec operator+(IVec a, IVec b) { return {a.x + b.x, a.y + b.y}; }
    friend IVec operator-(IVec a, IVec b) { return {a.x - b.x, a.y - b.y}; }
    friend IVec operator*(std::int64_t k, IVec a) { return {k * a.x, k * a.y}; }
    friend bool operator==(IVec a, IVec b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(IVec a, IVec b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

enum class SystemKind { Fibonacci, Chair };

/// A translation class of tiles. 1-D prototiles carry an exact length;
/// 2-D prototiles carry their unit cells with the anchor at the
/// south-west corner of the bounding box.
struct Prototile {
    int id = 0;
    std::string label;
    int dimension = 1;
    Scalar length;                // 1-D only
    std::vector<IVec> cells;      // 2-D only

    /// Centroid offset from the anchor. 1-D: length/2. 2-D: mean of the
    /// cell centers, a rational point.
    Scalar centroid_x() const {
        if (dimension == 1) return length * Scalar(make_rational(1, 2));
        Rational sx(0);
        for (const IVec& c : cells) sx += Rational(BigInt(2 * c.x + 1), BigInt(2));
        return Scalar(sx / Rational(BigInt(cells.size())));
    }
    Scalar centroid_y() const {
        if (dimension == 1) return Scalar(0);
        Rational sy(0);
        for (const IVec& c : cells) sy += Rational(BigInt(2 * c.y + 1), BigInt(2));
        return Scalar(sy / Rational(BigInt(cells.size())));
    }
};

/// One child of a substitution image: prototile plus offset inside the
/// inflated parent (1-D offsets are exact coordinates, 2-D lattice).
struct SubstitutionChild {
    int proto = 0;
    Scalar offset1d;
    IVec offset2d;
};

struct SubstitutionRule {
    Scalar inflation;
    std::vector<std::vector<SubstitutionChild>> images;  // indexed by prototile id
};

/// A fixed substitution tiling system. Only Fibonacci and chair ship,
/// but nothing here is specific to them beyond the two factories.
class TilingSystem {
public:
    SystemKind kind;
    std::string name;
    int dimension;
    std::vector<Prototile> prototiles;
    SubstitutionRule rule;

    const Prototile& prototile(int id) const {
        if (id < 0 || id >= static_cast<int>(prototiles.size()))
            fail(ErrorCode::UnknownPrototile,
                 name + ": unknown prototile id " + std::to_string(id));
        return prototiles[id];
    }

    int proto_by_label(const std::string& label) const {
        for (const Prototile& p : prototiles)
            if (p.label == label) return p.id;
        fail(ErrorCode::UnknownPrototile, name + ": unknown prototile label '" + label + "'");
    }

    /// Squared maximum tile diameter (2-D; rational) and the linear
    /// maximum diameter (1-D; exact scalar).
    Rational max_tile_diameter_sq() const {
        Rational best(0);
        for (const Prototile& p : prototiles) {
            for (const IVec& c1 : p.cells)
                for (const IVec& c2 : p.cells) {
                    // farthest corners of the two cells
                    Rational dx(BigInt(std::abs(c1.x - c2.x) + 1));
                    Rational dy(BigInt(std::abs(c1.y - c2.y) + 1));
                    Rational d = dx * dx + dy * dy;
                    if (d > best) best = d;
                }
        }
        return best;
    }
    Scalar max_tile_diameter_1d() const {
        Scalar best(0);
        for (const Prototile& p : prototiles) best = max(best, p.length);
        return best;
    }

    /// Exact-cover check of the rule: the inflated parent shape equals
    /// the disjoint union of its children (cell-by-cell in 2-D, ordered
    /// length sum in 1-D). Throws on violation.
    void validate_rule() const {
        for (const Prototile& p : prototiles) {
            const auto& children = rule.images.at(p.id);
            if (dimension == 1) {
                Scalar cursor(0);
                for (const SubstitutionChild& ch : children) {
                    if (!(ch.offset1d == cursor))
                        fail(ErrorCode::InvalidPatch, name + ": rule gap in " + p.label);
                    cursor += prototile(ch.proto).length;
                }
                if (!(cursor == rule.inflation * p.length))
                    fail(ErrorCode::InvalidPatch, name + ": rule length mismatch in " + p.label);
            } else {
                std::set<IVec> inflated;
                for (const IVec& c : p.cells)
                    for (std::int64_t dx = 0; dx < 2; ++dx)
                        for (std::int64_t dy = 0; dy < 2; ++dy)
                            inflated.insert({2 * c.x + dx, 2 * c.y + dy});
                std::set<IVec> covered;
                for (const SubstitutionChild& ch : children)
                    for (const IVec& c : prototile(ch.proto).cells) {
                        IVec cell = c + ch.offset2d;
                        if (!covered.insert(cell).second)
                            fail(ErrorCode::InvalidPatch, name + ": rule overlap in " + p.label);
                    }
                if (covered != inflated)
                    fail(ErrorCode::InvalidPatch, name + ": rule cover mismatch in " + p.label);
            }
        }
    }

    static const TilingSystem& fibonacci();
    static const TilingSystem& chair();
    static const TilingSystem& by_name(const std::string& name) {
        if (name == "fibonacci") return fibonacci();
        if (name == "chair") return chair();
        fail(ErrorCode::BadArgument, "unknown tiling system '" + name + "'");
    }
};

inline const TilingSystem& TilingSystem::fibonacci() {
    static const TilingSystem sys = [] {
        TilingSystem s;
        s.kind = SystemKind::Fibonacci;
        s.name = "fibonacci";
        s.dimension = 1;
        Prototile a{0, "a", 1, Scalar::phi(), {}};
        Prototile b{1, "b", 1, Scalar(1), {}};
        s.prototiles = {a, b};
        s.rule.inflation = Scalar::phi();
        // a -> ab, b -> a
        s.rule.images = {
            {{0, Scalar(0), {}}, {1, Scalar::phi(), {}}},
            {{0, Scalar(0), {}}},
        };
        s.validate_rule();
        return s;
    }();
    return sys;
}

inline const TilingSystem& TilingSystem::chair() {
    static const TilingSystem sys = [] {
        TilingSystem s;
        s.kind = SystemKind::Chair;
        s.name = "chair";
        s.dimension = 2;
        // Each L-tile is the 2x2 block minus the quadrant named by the
        // label, anchored at the block's SW corner.
        auto L = [](int id, const std::string& label, IVec missing) {
            Prototile p{id, label, 2, Scalar(0), {}};
            for (std::int64_t x = 0; x < 2; ++x)
                for (std::int64_t y = 0; y < 2; ++y)
                    if (!(IVec{x, y} == missing)) p.cells.push_back({x, y});
            return p;
        };
        // ids: NE=0, SE=1, SW=2, NW=3 (paper's listing order)
        s.prototiles = {L(0, "NE", {1, 1}), L(1, "SE", {1, 0}),
                        L(2, "SW", {0, 0}), L(3, "NW", {0, 1})};
        s.rule.inflation = Scalar(2);
        auto ch = [](int proto, std::int64_t x, std::int64_t y) {
            return SubstitutionChild{proto, Scalar(0), {x, y}};
        };
        // Same-orientation child at the inner corner, same-orientation
        // child in the block opposite the notch, and the two 90-degree
        // rotations at the arm ends; fixed by the exact-cover constraint.
        s.rule.images = {
            {ch(0, 1, 1), ch(0, 0, 0), ch(3, 2, 0), ch(1, 0, 2)},  // NE
            {ch(1, 1, 1), ch(1, 0, 2), ch(0, 0, 0), ch(2, 2, 2)},  // SE
            {ch(2, 1, 1), ch(2, 2, 2), ch(3, 2, 0), ch(1, 0, 2)},  // SW
            {ch(3, 1, 1), ch(3, 2, 0), ch(0, 0, 0), ch(2, 2, 2)},  // NW
        };
        s.validate_rule();
        return s;
    }();
    return sys;
}

/// Exact prototile counts of a level-m supertile, by iterating the
/// substitution's count action. Index = prototile id.
inline std::vector<BigInt> supertile_counts(const TilingSystem& sys, int proto, int level) {
    if (level < 0) fail(ErrorCode::BadArgument, "negative supertile level");
    sys.prototile(proto);  // validate id
    std::vector<BigInt> counts(sys.prototiles.size(), BigInt(0));
    counts[proto] = 1;
    for (int m = 0; m < level; ++m) {
        std::vector<BigInt> next(counts.size(), BigInt(0));
        for (size_t p = 0; p < counts.size(); ++p) {
            if (counts[p] == 0) continue;
            for (const SubstitutionChild& ch : sys.rule.images[p])
                next[ch.proto] += counts[p];
        }
        counts.swap(next);
    }
    return counts;
}

} // namespace tiletransport
