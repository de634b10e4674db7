#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tiletransport/signature.hpp"

namespace tiletransport {

/// Strongly pattern-equivariant assignment of scalars to tiles. The
/// value on a tile depends only on the tile's collar signature at the
/// cochain's radius; radius-0 rules are keyed directly by prototile.
/// Evaluating on a signature outside the rule's domain is an error, not
/// a silent zero.
class TopCochain {
public:
    static TopCochain on_labels(const TilingSystem& sys,
                                std::vector<Scalar> values_by_proto) {
        TopCochain c;
        c.system_ = &sys;
        c.label_values_ = std::move(values_by_proto);
        if (c.label_values_.size() != sys.prototiles.size())
            fail(ErrorCode::MissingSignature, "rule must cover every prototile label");
        return c;
    }

    static TopCochain on_signatures(const TilingSystem& sys, Radius radius,
                                    std::map<Signature, Scalar> rule) {
        TopCochain c;
        c.system_ = &sys;
        c.radius_ = std::move(radius);
        c.rule_ = std::move(rule);
        c.label_values_.clear();
        return c;
    }

    const TilingSystem& system() const { return *system_; }
    bool label_based() const { return !label_values_.empty(); }
    const Radius& radius() const { return radius_; }
    const std::vector<Scalar>& label_values() const { return label_values_; }

    Scalar value(const Patch& patch, int tile) const {
        if (label_based()) return label_values_[patch.tiles()[tile].proto];
        Signature sig = collar_signature(patch, CellRef::tile(tile), radius_);
        auto it = rule_.find(sig);
        if (it == rule_.end())
            fail(ErrorCode::MissingSignature, "tile signature outside the cochain rule");
        return it->second;
    }

    // Pointwise algebra; defined for label-based rules, which is where
    // mass bookkeeping happens.
    friend TopCochain operator-(const TopCochain& x, const TopCochain& y) {
        return combined(x, y, -1);
    }
    friend TopCochain operator+(const TopCochain& x, const TopCochain& y) {
        return combined(x, y, +1);
    }
    TopCochain offset(const Scalar& c) const {
        require_label_based(*this);
        TopCochain out = *this;
        for (Scalar& v : out.label_values_) v += c;
        return out;
    }

private:
    static void require_label_based(const TopCochain& c) {
        if (!c.label_based())
            fail(ErrorCode::BadArgument, "cochain algebra needs label-based rules");
    }
    static TopCochain combined(const TopCochain& x, const TopCochain& y, int sign) {
        require_label_based(x);
        require_label_based(y);
        if (x.system_ != y.system_)
            fail(ErrorCode::BadArgument, "cochain algebra across tiling systems");
        TopCochain out = x;
        for (size_t i = 0; i < out.label_values_.size(); ++i)
            out.label_values_[i] += sign > 0 ? y.label_values_[i] : -y.label_values_[i];
        return out;
    }

    const TilingSystem* system_ = nullptr;
    Radius radius_;
    std::vector<Scalar> label_values_;
    std::map<Signature, Scalar> rule_;
};

/// Radius-0 mass rule given per prototile label. Mass distributions must
/// be nonnegative; differences of cochains may of course go negative.
inline TopCochain mass_cochain(const TilingSystem& sys,
                               const std::map<std::string, Scalar>& by_label) {
    std::vector<Scalar> values(sys.prototiles.size(), Scalar(0));
    size_t seen = 0;
    for (const Prototile& p : sys.prototiles) {
        auto it = by_label.find(p.label);
        if (it == by_label.end())
            fail(ErrorCode::MissingSignature,
                 "mass rule is missing label '" + p.label + "'");
        if (it->second < Scalar(0))
            fail(ErrorCode::NonpositiveMass, "mass rule must be nonnegative");
        values[p.id] = it->second;
        ++seen;
    }
    if (seen != by_label.size())
        fail(ErrorCode::MissingSignature, "mass rule names an unknown label");
    return TopCochain::on_labels(sys, std::move(values));
}

/// Strongly PE assignment to oriented codim-1 faces, odd under
/// orientation reversal: the stored value is for the canonical
/// orientation (+x / +y normal).
class FluxCochain {
public:
    static FluxCochain on_signatures(const TilingSystem& sys, Radius radius,
                                     std::map<Signature, Scalar> rule) {
        FluxCochain c;
        c.system_ = &sys;
        c.radius_ = std::move(radius);
        c.rule_ = std::move(rule);
        return c;
    }

    const TilingSystem& system() const { return *system_; }
    const Radius& radius() const { return radius_; }
    const std::map<Signature, Scalar>& rule() const { return rule_; }

    /// Value on the face in its canonical orientation.
    Scalar value(const Patch& patch, int face) const {
        Signature sig = collar_signature(patch, CellRef::face(face), radius_);
        auto it = rule_.find(sig);
        if (it == rule_.end())
            fail(ErrorCode::MissingSignature, "face signature outside the flux rule");
        return it->second;
    }

private:
    const TilingSystem* system_ = nullptr;
    Radius radius_;
    std::map<Signature, Scalar> rule_;
};

/// Explicit per-face values on one patch (canonical orientations).
using FaceValues = std::map<int, Scalar>;
/// Explicit per-tile values on one patch.
using TileValues = std::map<int, Scalar>;

/// Evaluate a flux rule on every face with sufficient collar.
inline FaceValues evaluate_flux(const FluxCochain& beta, const Patch& patch) {
    FaceValues out;
    for (int f = 0; f < static_cast<int>(patch.faces().size()); ++f) {
        try {
            out[f] = beta.value(patch, f);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientCollar) throw;
        }
    }
    return out;
}

/// Coboundary with outward-positive signs: (delta beta)(t) is the signed
/// sum of beta over the faces of t. Returns values on the tiles whose
/// faces all carry values.
inline TileValues coboundary(const FaceValues& beta, const Patch& patch) {
    TileValues out;
    for (int t = 0; t < patch.tile_count(); ++t) {
        Scalar acc(0);
        bool complete = true;
        for (auto [face, sign] : patch.tile_faces(t)) {
            auto it = beta.find(face);
            if (it == beta.end()) { complete = false; break; }
            acc += sign > 0 ? it->second : -it->second;
        }
        if (complete) out[t] = acc;
    }
    return out;
}

inline TileValues coboundary(const FluxCochain& beta, const Patch& patch) {
    return coboundary(evaluate_flux(beta, patch), patch);
}

/// Integral of a top cochain over a whole patch. For radius > 0 rules
/// every tile needs sufficient collar, as in the operation contract.
inline Scalar integrate(const TopCochain& alpha, const Patch& patch) {
    Scalar acc(0);
    for (int t = 0; t < patch.tile_count(); ++t) acc += alpha.value(patch, t);
    return acc;
}

/// Integral over a combinatorial region: sum over parts of
/// count * (value on that supertile). Label-based rules integrate via
/// exact substitution counts; signature rules materialize the parts.
inline Scalar integrate(const TopCochain& alpha, const RegionSpec& region) {
    const TilingSystem& sys = alpha.system();
    region.validate(sys);
    Scalar acc(0);
    for (const RegionPart& part : region.parts) {
        Scalar per_supertile(0);
        if (alpha.label_based()) {
            std::vector<BigInt> counts = supertile_counts(sys, part.proto, part.level);
            for (size_t p = 0; p < counts.size(); ++p)
                per_supertile += Scalar(Rational(counts[p])) * alpha.label_values()[p];
        } else {
            per_supertile = integrate(alpha, supertile(sys, part.proto, part.level));
        }
        acc += Scalar(Rational(BigInt(part.count))) * per_supertile;
    }
    return acc;
}

/// Integral of explicit tile values over a tile subset.
inline Scalar integrate_values(const TileValues& values, const std::vector<int>& tiles) {
    Scalar acc(0);
    for (int t : tiles) {
        auto it = values.find(t);
        if (it == values.end())
            fail(ErrorCode::MissingSignature, "tile has no value in this assignment");
        acc += it->second;
    }
    return acc;
}

/// One row of a discrepancy table: the exact integral of a cochain over
/// a region against the region's boundary measure.
struct DiscrepancyPoint {
    std::string descriptor;
    Scalar integral;
    Scalar boundary;
    double ratio = 0;  // |integral| / boundary
};

using IntegrationTarget = std::variant<Patch, RegionSpec>;

struct SeriesTarget {
    std::string descriptor;
    IntegrationTarget target;
};

inline std::vector<DiscrepancyPoint> discrepancy_series(
    const TopCochain& alpha, const std::vector<SeriesTarget>& family) {
    if (family.empty()) fail(ErrorCode::BadArgument, "empty region family");
    std::vector<DiscrepancyPoint> out;
    out.reserve(family.size());
    for (const SeriesTarget& item : family) {
        DiscrepancyPoint point;
        point.descriptor = item.descriptor;
        if (const Patch* patch = std::get_if<Patch>(&item.target)) {
            point.integral = integrate(alpha, *patch);
            point.boundary = boundary_measure(*patch);
        } else {
            const RegionSpec& region = std::get<RegionSpec>(item.target);
            point.integral = integrate(alpha, region);
            point.boundary = region.declared_boundary;
        }
        point.ratio = point.integral.abs().to_double() / point.boundary.to_double();
        out.push_back(std::move(point));
    }
    return out;
}

/// Partial sums of a 1-D top cochain: vertex values with beta(v0) = 0 at
/// the left end and delta(beta) = alpha on the patch.
struct Primitive1D {
    std::vector<Scalar> vertex_values;  // one per face, left to right
    Scalar sup_abs;
};

inline Primitive1D primitive_1d(const TopCochain& alpha, const Patch& patch) {
    if (patch.dimension() != 1)
        fail(ErrorCode::NotOneDimensional, "primitive_1d needs a 1-D patch");
    Primitive1D out;
    out.sup_abs = Scalar(0);
    Scalar acc(0);
    out.vertex_values.push_back(acc);
    for (int t = 0; t < patch.tile_count(); ++t) {
        acc += alpha.value(patch, t);
        out.vertex_values.push_back(acc);
        out.sup_abs = max(out.sup_abs, acc.abs());
    }
    return out;
}

} // namespace tiletransport
