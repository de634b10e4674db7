#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tiletransport/cochain.hpp"
#include "tiletransport/flow.hpp"
#include "tiletransport/linalg.hpp"

namespace tiletransport {

/// Bounded-transport feasibility question on one patch: move `source`
/// to `target` with no parcel travelling farther than `radius`, with
/// deficits forgiven for tiles within `slack_band` of the boundary.
struct TransportProblem {
    const Patch* patch = nullptr;
    TopCochain source;
    TopCochain target;
    Radius radius;
    Radius slack_band;
};

struct TransportMove {
    int src = -1;
    int dst = -1;
    Scalar mass;
    double displacement = 0;
};

struct TransportPlan {
    std::vector<TransportMove> moves;
    /// Optional grouping into rounds: [begin, end) ranges into `moves`.
    std::vector<std::pair<int, int>> rounds;
};

/// Witness returned by hall_feasible: either a saturating flow (as
/// moves plus boundary slack bookkeeping) or a violating tile set U
/// whose mass exceeds the opposing mass within radius r of U.
struct HallCertificate {
    enum Type { Flow, Cut } type = Flow;
    std::vector<TransportMove> moves;  // src != dst
    std::map<int, Scalar> retained;    // mass that stays on its tile
    std::map<int, Scalar> absorbed;    // boundary supply sent outward
    std::map<int, Scalar> provided;    // boundary demand filled from outside
    std::vector<int> cut_tiles;
    bool cut_on_supply_side = true;    // true: s(U) > d(U_r); false: d(U) > s(U_r)
    Scalar cut_mass;
    Scalar cut_capacity;
};

struct HallResult {
    bool feasible = false;
    HallCertificate certificate;
};

namespace detail {

inline std::vector<Scalar> masses_of(const TopCochain& c, const Patch& patch) {
    std::vector<Scalar> out;
    out.reserve(patch.tile_count());
    for (int t = 0; t < patch.tile_count(); ++t) {
        Scalar v = c.value(patch, t);
        if (v < Scalar(0))
            fail(ErrorCode::NonpositiveMass, "mass distributions must be nonnegative");
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<char> near_boundary_mask(const Patch& patch, const Radius& band) {
    std::vector<char> mask(patch.tile_count(), 0);
    for (int t = 0; t < patch.tile_count(); ++t)
        mask[t] = patch.tile_near_boundary(t, band) ? 1 : 0;
    return mask;
}

inline std::int64_t checked_int64(const BigInt& v, const char* what) {
    if (v > BigInt(std::numeric_limits<std::int64_t>::max() / 4) ||
        v < BigInt(std::numeric_limits<std::int64_t>::min() / 4))
        fail(ErrorCode::Overflow, std::string("flow value too large: ") + what);
    return v.convert_to<std::int64_t>();
}

/// Clear denominators: scale all values into Z[phi].
struct GoldenScaling {
    BigInt scale{1};
    GoldenInt operator()(const Scalar& v) const {
        Rational a = v.rational_part() * Rational(scale);
        Rational b = v.phi_part() * Rational(scale);
        if (denominator(a) != 1 || denominator(b) != 1)
            fail(ErrorCode::Overflow, "scaling failed to clear denominators");
        return {checked_int64(numerator(a), "mass"), checked_int64(numerator(b), "mass")};
    }
    static GoldenScaling for_values(const std::vector<const std::vector<Scalar>*>& groups) {
        GoldenScaling s;
        for (const auto* g : groups)
            for (const Scalar& v : *g) {
                s.scale = boost::multiprecision::lcm(s.scale, denominator(v.rational_part()));
                s.scale = boost::multiprecision::lcm(s.scale, denominator(v.phi_part()));
            }
        return s;
    }
};

/// Invoke fn(i, j) for every pair with from[i], to[j] set and centroid
/// distance <= r. Two-pointer sweep in 1-D, bucketed grid in 2-D; the
/// admissibility test itself is exact.
inline void for_each_within(const Patch& patch, const Radius& r,
                            const std::vector<char>& from, const std::vector<char>& to,
                            const std::function<void(int, int)>& fn) {
    const int n = patch.tile_count();
    if (patch.dimension() == 1) {
        // tiles are sorted by coordinate, hence by centroid
        int lo = 0;
        for (int i = 0; i < n; ++i) {
            if (!from[i]) continue;
            Scalar ci = patch.centroid_x(i);
            while (lo < n && ci - patch.centroid_x(lo) > r.linear) ++lo;
            for (int j = lo; j < n; ++j) {
                Scalar cj = patch.centroid_x(j);
                if (cj - ci > r.linear) break;
                if (to[j]) fn(i, j);
            }
        }
        return;
    }
    // threshold in scaled integer units: d2 <= floor(scale^2 r^2)
    Rational bound = Rational(BigInt(Patch::kCentroidScale * Patch::kCentroidScale)) *
                     r.squared;
    std::int64_t threshold = checked_int64(floor_rational(bound), "radius");
    const std::int64_t bucket = 4;
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> buckets;
    for (int j = 0; j < n; ++j) {
        if (!to[j]) continue;
        const IVec pos = patch.tiles()[j].pos;
        buckets[{floor_div(BigInt(pos.x), BigInt(bucket)).convert_to<std::int64_t>(),
                 floor_div(BigInt(pos.y), BigInt(bucket)).convert_to<std::int64_t>()}]
            .push_back(j);
    }
    double reach = r.approx + 3.0;
    for (int i = 0; i < n; ++i) {
        if (!from[i]) continue;
        const IVec pos = patch.tiles()[i].pos;
        auto b0x = static_cast<std::int64_t>(std::floor((pos.x - reach) / bucket)) - 1;
        auto b1x = static_cast<std::int64_t>(std::floor((pos.x + reach) / bucket)) + 1;
        auto b0y = static_cast<std::int64_t>(std::floor((pos.y - reach) / bucket)) - 1;
        auto b1y = static_cast<std::int64_t>(std::floor((pos.y + reach) / bucket)) + 1;
        for (std::int64_t bx = b0x; bx <= b1x; ++bx)
            for (std::int64_t by = b0y; by <= b1y; ++by) {
                auto it = buckets.find({bx, by});
                if (it == buckets.end()) continue;
                for (int j : it->second)
                    if (patch.centroid_dist_sq_scaled(i, j) <= threshold) fn(i, j);
            }
    }
}

} // namespace detail

/// Hall-marriage feasibility as an exact flow problem. Every tile is a
/// supply (source mass) and a demand (target mass); mass may move
/// between tiles whose reference points are within r; tiles within
/// slack_band of the boundary may shed supply outward or import demand
/// from outside. Supplies and demands away from the slack zone are hard
/// constraints; feasibility is decided by a circulation with lower
/// bounds, reduced to one exact max-flow.
inline HallResult hall_feasible_values(const Patch& patch,
                                       const std::vector<Scalar>& supply,
                                       const std::vector<Scalar>& demand,
                                       const Radius& radius, const Radius& slack_band) {
    const int n = patch.tile_count();
    for (int i = 0; i < n; ++i)
        if (supply[i] < Scalar(0) || demand[i] < Scalar(0))
            fail(ErrorCode::NonpositiveMass, "mass distributions must be nonnegative");
    std::vector<char> boundary = detail::near_boundary_mask(patch, slack_band);

    auto scaling = detail::GoldenScaling::for_values({&supply, &demand});
    std::vector<GoldenInt> s(n), d(n);
    GoldenInt total_s{0, 0}, total_d{0, 0};
    std::vector<char> has_s(n, 0), has_d(n, 0);
    for (int i = 0; i < n; ++i) {
        s[i] = scaling(supply[i]);
        d[i] = scaling(demand[i]);
        has_s[i] = s[i].positive();
        has_d[i] = d[i].positive();
        total_s += s[i];
        total_d += d[i];
    }
    GoldenInt big = total_s + total_d + GoldenInt{1, 0};

    // nodes: 0 SS, 1 TT, 2 sigma, 3 tau, then supply and demand copies
    MaxFlow net(4 + 2 * n);
    const int SS = 0, TT = 1, SIGMA = 2, TAU = 3;
    auto snode = [&](int i) { return 4 + i; };
    auto dnode = [&](int j) { return 4 + n + j; };

    for (int i = 0; i < n; ++i)
        if (has_s[i]) net.add_edge(SS, snode(i), s[i]);
    for (int j = 0; j < n; ++j)
        if (has_d[j]) net.add_edge(dnode(j), TT, d[j]);
    net.add_edge(SS, TAU, total_d);
    net.add_edge(SIGMA, TT, total_s);
    net.add_edge(TAU, SIGMA, big);
    std::vector<std::pair<int, int>> absorb_arcs, provide_arcs;  // (edge, tile)
    for (int i = 0; i < n; ++i)
        if (has_s[i] && boundary[i]) absorb_arcs.emplace_back(net.add_edge(snode(i), TAU, big), i);
    for (int j = 0; j < n; ++j)
        if (has_d[j] && boundary[j]) provide_arcs.emplace_back(net.add_edge(SIGMA, dnode(j), big), j);

    std::vector<std::tuple<int, int, int>> transport_arcs;  // (edge, i, j)
    detail::for_each_within(patch, radius, has_s, has_d, [&](int i, int j) {
        transport_arcs.emplace_back(net.add_edge(snode(i), dnode(j), big), i, j);
    });

    GoldenInt value = net.run(SS, TT);
    HallResult result;
    result.feasible = value == total_s + total_d;
    Rational scale_r(scaling.scale);

    if (result.feasible) {
        result.certificate.type = HallCertificate::Flow;
        for (auto [edge, i, j] : transport_arcs) {
            GoldenInt f = net.flow_on(edge);
            if (!f.positive()) continue;
            if (i == j) {
                result.certificate.retained[i] = f.to_scalar(scale_r);
            } else {
                result.certificate.moves.push_back(
                    {i, j, f.to_scalar(scale_r), patch.tile_distance(i, j)});
            }
        }
        for (auto [edge, i] : absorb_arcs) {
            GoldenInt f = net.flow_on(edge);
            if (f.positive()) result.certificate.absorbed[i] = f.to_scalar(scale_r);
        }
        for (auto [edge, j] : provide_arcs) {
            GoldenInt f = net.flow_on(edge);
            if (f.positive()) result.certificate.provided[j] = f.to_scalar(scale_r);
        }
        return result;
    }

    // Infeasible: extract a violating tile set from the min cut.
    std::vector<char> reach = net.source_side(SS);
    auto try_certificate = [&](bool supply_side) -> bool {
        std::vector<int> u;
        for (int t = 0; t < n; ++t) {
            if (boundary[t]) continue;
            if (supply_side && has_s[t] && reach[snode(t)]) u.push_back(t);
            if (!supply_side && has_d[t] && !reach[dnode(t)]) u.push_back(t);
        }
        if (u.empty()) return false;
        std::vector<char> in_u(n, 0);
        for (int t : u) in_u[t] = 1;
        // opposing mass within r of U
        std::vector<char> everything(n, 1);
        std::vector<char> covered(n, 0);
        detail::for_each_within(patch, radius, in_u, everything,
                                [&](int, int j) { covered[j] = 1; });
        Scalar inside(0), capacity(0);
        for (int t = 0; t < n; ++t) {
            if (in_u[t]) inside += supply_side ? supply[t] : demand[t];
            if (covered[t]) capacity += supply_side ? demand[t] : supply[t];
        }
        if (!(inside > capacity)) return false;
        result.certificate.type = HallCertificate::Cut;
        result.certificate.cut_tiles = std::move(u);
        result.certificate.cut_on_supply_side = supply_side;
        result.certificate.cut_mass = inside;
        result.certificate.cut_capacity = capacity;
        return true;
    };
    if (!try_certificate(true) && !try_certificate(false))
        fail(ErrorCode::Overflow, "max-flow infeasible but no violating set found");
    return result;
}

inline HallResult hall_feasible(const TransportProblem& problem) {
    const Patch& patch = *problem.patch;
    return hall_feasible_values(patch, detail::masses_of(problem.source, patch),
                                detail::masses_of(problem.target, patch),
                                problem.radius, problem.slack_band);
}

/// Least feasible radius on the half-max-tile-diameter grid, per patch.
/// hall_feasible is monotone in r, so a binary search on the grid index
/// is exact.
inline std::vector<Radius> min_transport_radius(const TopCochain& source,
                                                const TopCochain& target,
                                                const std::vector<const Patch*>& family,
                                                const Radius& slack_band) {
    if (family.empty()) fail(ErrorCode::BadArgument, "empty patch family");
    std::vector<Radius> out;
    for (const Patch* patch : family) {
        const TilingSystem& sys = patch->system();
        double half_step = patch->dimension() == 1
                               ? sys.max_tile_diameter_1d().to_double() / 2
                               : std::sqrt(to_double(sys.max_tile_diameter_sq())) / 2;
        int hi = static_cast<int>(std::ceil(patch->diameter_bound() / half_step)) + 1;
        auto feasible_at = [&](int k) {
            TransportProblem problem{patch, source, target, Radius::grid(sys, k), slack_band};
            return hall_feasible(problem).feasible;
        };
        if (!feasible_at(hi))
            fail(ErrorCode::SearchExhausted, "infeasible even at the patch diameter");
        int lo = 0;
        if (!feasible_at(0)) {
            // invariant: infeasible at lo, feasible at hi
            while (hi - lo > 1) {
                int mid = lo + (hi - lo) / 2;
                (feasible_at(mid) ? hi : lo) = mid;
            }
        } else {
            hi = 0;
        }
        out.push_back(Radius::grid(sys, hi));
    }
    return out;
}

/// Result of solving (delta beta)(t) = alpha(t) with beta constant on
/// face signature classes at a given radius.
struct PESolveResult {
    Radius radius;
    std::vector<Signature> classes;
    std::vector<Scalar> values;          // one per class
    FaceValues face_values;              // classified faces -> value
    std::vector<int> equation_tiles;     // interior tiles carrying equations
    Scalar residual_max;                 // exact max |(delta beta - alpha)(t)|
    std::optional<std::pair<int, Scalar>> witness;  // first nonzero residual
    bool exact() const { return residual_max.is_zero(); }
};

/// Shared implementation over explicit per-tile alpha values.
inline PESolveResult solve_pe_coboundary_values(
    const std::function<std::optional<Scalar>(int)>& alpha_at, const Patch& patch,
    const Radius& radius) {
    PESolveResult result;
    result.radius = radius;
    std::map<Signature, int> class_ids;
    std::map<int, int> face_class;
    for (int f = 0; f < static_cast<int>(patch.faces().size()); ++f) {
        if (patch.faces()[f].boundary()) continue;
        try {
            Signature sig = collar_signature(patch, CellRef::face(f), radius);
            auto [it, fresh] =
                class_ids.emplace(std::move(sig), static_cast<int>(class_ids.size()));
            face_class[f] = it->second;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientCollar) throw;
        }
    }
    if (class_ids.empty())
        fail(ErrorCode::EmptyInterior, "no faces carry a full radius-R collar");
    result.classes.resize(class_ids.size());
    for (auto& [sig, id] : class_ids) result.classes[id] = sig;

    std::vector<std::vector<long long>> rows;
    std::vector<Scalar> rhs;
    for (int t = 0; t < patch.tile_count(); ++t) {
        bool complete = true;
        std::vector<long long> row(class_ids.size(), 0);
        for (auto [face, sign] : patch.tile_faces(t)) {
            auto it = face_class.find(face);
            if (it == face_class.end()) { complete = false; break; }
            row[it->second] += sign;
        }
        if (!complete) continue;
        std::optional<Scalar> a = alpha_at(t);
        if (!a) continue;
        rows.push_back(std::move(row));
        rhs.push_back(std::move(*a));
        result.equation_tiles.push_back(t);
    }
    if (rows.empty())
        fail(ErrorCode::EmptyInterior, "no interior tiles with full collars");

    LeastSquaresResult ls = least_squares(rows, rhs);
    result.values = std::move(ls.solution);
    result.residual_max = ls.residual_max_abs;
    for (size_t r = 0; r < ls.residual.size(); ++r)
        if (!ls.residual[r].is_zero() && !result.witness) {
            result.witness = {result.equation_tiles[r], ls.residual[r]};
            break;
        }
    for (auto& [face, cls] : face_class) result.face_values[face] = result.values[cls];
    return result;
}

inline PESolveResult solve_pe_coboundary(const TopCochain& alpha, const Patch& patch,
                                         const Radius& radius) {
    return solve_pe_coboundary_values(
        [&](int t) -> std::optional<Scalar> {
            try {
                return alpha.value(patch, t);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::InsufficientCollar) return std::nullopt;
                throw;
            }
        },
        patch, radius);
}

inline PESolveResult solve_pe_coboundary(const TileValues& alpha, const Patch& patch,
                                         const Radius& radius) {
    return solve_pe_coboundary_values(
        [&](int t) -> std::optional<Scalar> {
            auto it = alpha.find(t);
            if (it == alpha.end()) return std::nullopt;
            return it->second;
        },
        patch, radius);
}

namespace detail {

/// Exact crossing sweep of one segment (2-D), accumulating signed mass
/// per crossed face; restarts with a perturbed start point whenever the
/// segment passes through a lattice vertex.
inline bool accumulate_crossings_2d(const Patch& patch, Rational px, Rational py,
                                    const Rational& qx, const Rational& qy,
                                    const Scalar& mass, FaceValues& flux) {
    auto sweep_axis = [&](int axis, const Rational& pa, const Rational& pb,
                          const Rational& qa, const Rational& qb,
                          std::vector<std::pair<int, bool>>& hits) -> bool {
        // crossings of integer lines a = k between pa and qa
        if (pa == qa) return true;
        bool forward = qa > pa;
        BigInt k_lo = floor_rational(forward ? pa : qa) + 1;
        BigInt k_hi = ceil_rational(forward ? qa : pa) - 1;
        for (BigInt k = k_lo; k <= k_hi; ++k) {
            Rational t = (Rational(k) - pa) / (qa - pa);
            Rational other = pb + t * (qb - pb);
            if (denominator(other) == 1) return false;  // lattice vertex hit
            BigInt row = floor_rational(other);
            IVec corner = axis == 0
                              ? IVec{k.convert_to<std::int64_t>(), row.convert_to<std::int64_t>()}
                              : IVec{row.convert_to<std::int64_t>(), k.convert_to<std::int64_t>()};
            int face = patch.face_index(axis, corner);
            if (face >= 0) hits.push_back({face, forward});
        }
        return true;
    };
    std::vector<std::pair<int, bool>> hits;
    if (!sweep_axis(0, px, py, qx, qy, hits)) return false;
    if (!sweep_axis(1, py, px, qy, qx, hits)) return false;
    for (auto [face, forward] : hits) {
        auto [it, fresh] = flux.try_emplace(face, Scalar(0));
        it->second += forward ? mass : -mass;
    }
    return true;
}

} // namespace detail

/// Flux cochain values induced by routing every move along the straight
/// segment between tile reference points: beta on a face is the net
/// mass crossing it in the canonical orientation, so that
/// delta beta = source - target holds exactly on interior tiles.
inline FaceValues flux_from_plan(const std::vector<TransportMove>& moves,
                                 const Patch& patch) {
    FaceValues flux;
    for (int f = 0; f < static_cast<int>(patch.faces().size()); ++f) flux[f] = Scalar(0);
    if (patch.dimension() == 1) {
        for (const TransportMove& move : moves) {
            if (move.src == move.dst) continue;
            Scalar c1 = patch.centroid_x(move.src);
            Scalar c2 = patch.centroid_x(move.dst);
            bool forward = c2 > c1;
            Scalar lo = forward ? c1 : c2, hi = forward ? c2 : c1;
            for (int f = 0; f < static_cast<int>(patch.faces().size()); ++f) {
                const Scalar& x = patch.faces()[f].x;
                if (lo < x && x < hi) {
                    auto [it, fresh] = flux.try_emplace(f, Scalar(0));
                    it->second += forward ? move.mass : -move.mass;
                }
            }
        }
        return flux;
    }
    for (const TransportMove& move : moves) {
        if (move.src == move.dst) continue;
        Rational px = patch.centroid_x(move.src).rational_part();
        Rational py = patch.centroid_y(move.src).rational_part();
        Rational qx = patch.centroid_x(move.dst).rational_part();
        Rational qy = patch.centroid_y(move.dst).rational_part();
        // fixed deterministic nudge ladder for lattice-vertex hits
        Rational eps = make_rational(1, 1000);
        bool done = false;
        for (int attempt = 0; attempt < 40 && !done; ++attempt) {
            done = detail::accumulate_crossings_2d(patch, px, py, qx, qy, move.mass, flux);
            if (!done) {
                px += eps;
                py += eps * make_rational(3, 7);
                eps /= 2;
            }
        }
        if (!done) fail(ErrorCode::Overflow, "could not perturb away a vertex crossing");
    }
    return flux;
}

/// The N3-round constructive transport: each round moves beta(c)/N3
/// across every face c (in the canonical orientation), so tile masses
/// walk in exact straight lines from source to source - delta beta.
/// Requires strictly positive masses at both ends.
inline TransportPlan stepwise_plan_from_flux(const FaceValues& beta,
                                             const std::vector<Scalar>& source,
                                             const Patch& patch) {
    // restrict to faces between two real tiles
    std::vector<std::pair<int, Scalar>> active;
    for (const auto& [f, v] : beta) {
        const Face& face = patch.faces().at(f);
        if (face.boundary() || v.is_zero()) continue;
        active.push_back({f, v});
    }
    TransportPlan plan;
    if (active.empty()) return plan;

    // involved tiles, their net change, and the positivity data
    std::map<int, Scalar> delta;  // delta beta restricted to active faces
    for (const auto& [f, v] : active) {
        const Face& face = patch.faces()[f];
        auto lo = delta.try_emplace(face.tile_lo, Scalar(0));
        lo.first->second += v;
        auto hi = delta.try_emplace(face.tile_hi, Scalar(0));
        hi.first->second -= v;
    }
    Scalar epsilon;
    bool first = true;
    int max_faces = 0;
    Scalar max_beta(0);
    for (const auto& [t, dv] : delta) {
        Scalar start = source.at(t);
        Scalar end = start - dv;
        if (!(start > Scalar(0)) || !(end > Scalar(0)))
            fail(ErrorCode::NonpositiveMass,
                 "stepwise construction needs strictly positive start and end masses");
        Scalar m = min(start, end);
        epsilon = first ? m : min(epsilon, m);
        first = false;
        max_faces = std::max(max_faces,
                             static_cast<int>(patch.tile_faces(t).size()));
    }
    for (const auto& [f, v] : active) max_beta = max(max_beta, v.abs());

    // N3 = ceil(N1 N2 / eps), so each transfer is below eps / N1
    Scalar ratio = Scalar(max_faces) * max_beta / epsilon;
    long long rounds_count = ratio.ceil().convert_to<long long>();
    if (rounds_count < 1) rounds_count = 1;
    Scalar inv_rounds = Scalar(1) / Scalar(rounds_count);

    std::map<int, Scalar> mass;
    for (const auto& [t, dv] : delta) mass[t] = source.at(t);

    for (long long round = 1; round <= rounds_count; ++round) {
        int begin = static_cast<int>(plan.moves.size());
        for (const auto& [f, v] : active) {
            const Face& face = patch.faces()[f];
            Scalar step = v * inv_rounds;
            int src = face.tile_lo, dst = face.tile_hi;
            if (step < Scalar(0)) { std::swap(src, dst); step = -step; }
            plan.moves.push_back({src, dst, step, patch.tile_distance(src, dst)});
            mass[src] -= step;
            mass[dst] += step;
        }
        plan.rounds.push_back({begin, static_cast<int>(plan.moves.size())});
        // exact invariant: mass = start + (round / N3)(end - start) >= eps
        for (const auto& [t, dv] : delta) {
            Scalar expected =
                source.at(t) - Scalar(round) * inv_rounds * dv;
            if (!(mass[t] == expected) || !(mass[t] >= epsilon))
                fail(ErrorCode::NonpositiveMass, "intermediate mass fell below epsilon");
        }
    }
    return plan;
}

inline TransportPlan stepwise_plan_from_flux(const FaceValues& beta,
                                             const TopCochain& source,
                                             const Patch& patch) {
    return stepwise_plan_from_flux(beta, detail::masses_of(source, patch), patch);
}

/// Independent checker for transport plans: exact per-tile conservation
/// against source and target, the displacement bound, positivity, and
/// (when rounds are present) nonnegative intermediate masses.
struct VerificationReport {
    bool pass = true;
    std::string first_violation;
    double max_displacement = 0;
    Scalar min_intermediate;
    bool has_intermediate = false;

    void violate(const std::string& what) {
        if (pass) first_violation = what;
        pass = false;
    }
};

inline VerificationReport verify_plan(const TransportPlan& plan,
                                      const std::vector<Scalar>& source,
                                      const std::vector<Scalar>& target,
                                      const Patch& patch, const Radius& r,
                                      const std::set<int>& slack_exempt = {}) {
    VerificationReport report;
    std::vector<Scalar> net = source;
    for (size_t m = 0; m < plan.moves.size(); ++m) {
        const TransportMove& move = plan.moves[m];
        if (move.src < 0 || move.src >= patch.tile_count() || move.dst < 0 ||
            move.dst >= patch.tile_count()) {
            report.violate("move " + std::to_string(m) + " references a missing tile");
            continue;
        }
        if (!(move.mass > Scalar(0)))
            report.violate("move " + std::to_string(m) + " carries nonpositive mass");
        bool ok = patch.dimension() == 1
                      ? (patch.centroid_x(move.src) - patch.centroid_x(move.dst)).abs() <=
                            r.linear
                      : Rational(BigInt(patch.centroid_dist_sq_scaled(move.src, move.dst))) <=
                            Rational(BigInt(Patch::kCentroidScale * Patch::kCentroidScale)) *
                                r.squared;
        if (!ok)
            report.violate("move " + std::to_string(m) + " exceeds the radius bound");
        report.max_displacement =
            std::max(report.max_displacement, patch.tile_distance(move.src, move.dst));
        net[move.src] -= move.mass;
        net[move.dst] += move.mass;
    }
    for (int t = 0; t < patch.tile_count(); ++t) {
        if (slack_exempt.count(t)) continue;
        if (!(net[t] == target[t]))
            report.violate("tile " + std::to_string(t) +
                           " ends with the wrong mass (conservation)");
    }
    if (!plan.rounds.empty()) {
        std::vector<Scalar> running = source;
        report.has_intermediate = true;
        bool first = true;
        for (auto [begin, end] : plan.rounds) {
            for (int m = begin; m < end; ++m) {
                running[plan.moves[m].src] -= plan.moves[m].mass;
                running[plan.moves[m].dst] += plan.moves[m].mass;
            }
            for (int t = 0; t < patch.tile_count(); ++t) {
                if (first || running[t] < report.min_intermediate)
                    report.min_intermediate = running[t];
                first = false;
                if (running[t] < Scalar(0))
                    report.violate("tile " + std::to_string(t) +
                                   " goes negative during round execution");
            }
        }
    }
    return report;
}

/// Laczkovich-style point counting: exact point counts in half-open
/// axis-aligned squares against an expected density.
struct PointSquare {
    Rational x0, y0, side;
};
struct PointDiscrepancy {
    long long count = 0;
    double excess = 0;     // count - density * area
    double perimeter = 0;  // 4 * side
    double ratio = 0;      // |excess| / perimeter
};

inline std::vector<PointDiscrepancy> point_discrepancy_series(
    const std::vector<std::pair<Rational, Rational>>& points, double density,
    const std::vector<PointSquare>& squares) {
    std::vector<PointDiscrepancy> out;
    out.reserve(squares.size());
    for (const PointSquare& sq : squares) {
        Rational x1 = sq.x0 + sq.side, y1 = sq.y0 + sq.side;
        long long count = 0;
        for (const auto& [px, py] : points)
            if (px >= sq.x0 && px < x1 && py >= sq.y0 && py < y1) ++count;
        PointDiscrepancy d;
        d.count = count;
        double side = to_double(sq.side);
        d.excess = double(count) - density * side * side;
        d.perimeter = 4 * side;
        d.ratio = std::abs(d.excess) / d.perimeter;
        out.push_back(d);
    }
    return out;
}

} // namespace tiletransport
