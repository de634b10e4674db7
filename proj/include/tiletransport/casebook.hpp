#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tiletransport/transport.hpp"

namespace tiletransport {

/// The two Fibonacci mass distributions: unit mass on a tiles versus
/// phi on b tiles. Equal densities, same cohomology class only weakly.
struct FibonacciCase {
    TopCochain f1;
    TopCochain f2;
    bool expect_bounded = true;
    bool expect_weakly_pe = true;
    bool expect_strongly_pe = false;
};

inline FibonacciCase fibonacci_case() {
    const TilingSystem& sys = TilingSystem::fibonacci();
    FibonacciCase c{
        mass_cochain(sys, {{"a", Scalar(1)}, {"b", Scalar(0)}}),
        mass_cochain(sys, {{"a", Scalar(0)}, {"b", Scalar::phi()}}),
    };
    return c;
}

/// The three chair distributions; f2 <-> f3 admits strongly PE
/// transport, while f1 differs from both by a class that is not even
/// well-balanced.
struct ChairCase {
    TopCochain f1;
    TopCochain f2;
    TopCochain f3;
    bool expect_f2_f3_strongly_pe = true;
    bool expect_f1_f2_bounded = false;
    bool expect_f1_f3_bounded = false;
};

inline ChairCase chair_case() {
    const TilingSystem& sys = TilingSystem::chair();
    auto mass = [&](long long ne, long long se, long long sw, long long nw) {
        return mass_cochain(sys, {{"NE", Scalar(ne)},
                                  {"SE", Scalar(se)},
                                  {"SW", Scalar(sw)},
                                  {"NW", Scalar(nw)}});
    };
    return ChairCase{mass(2, 0, 0, 0), mass(1, 0, 1, 0), mass(0, 1, 0, 1)};
}

/// Witness that no strongly PE beta of radius R satisfies
/// delta beta = f1 - f2 on the Fibonacci tiling: two vertices with equal
/// radius-R collars between which f1 integrates to a positive integer
/// while f2 integrates to a positive multiple of phi. Z and phi*Z meet
/// only at zero, so the two integrals cannot agree.
struct ObstructionWitness {
    int vertex_lo = 0;   // face indices in the search patch
    int vertex_hi = 0;
    Scalar position_lo;
    Scalar position_hi;
    Scalar integral_f1;  // positive integer
    Scalar integral_f2;  // positive multiple of phi
};

inline ObstructionWitness strong_pe_obstruction(const Radius& radius, const Patch& patch) {
    if (patch.dimension() != 1)
        fail(ErrorCode::NotOneDimensional, "the obstruction search is 1-D");
    const TilingSystem& sys = patch.system();
    const int nfaces = static_cast<int>(patch.faces().size());
    std::vector<std::optional<Signature>> sigs(nfaces);
    for (int f = 0; f < nfaces; ++f) {
        try {
            sigs[f] = collar_signature(patch, CellRef::face(f), radius);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientCollar) throw;
        }
    }
    // lexicographically first valid pair, scanning left to right
    for (int i = 0; i < nfaces; ++i) {
        if (!sigs[i]) continue;
        for (int j = i + 1; j < nfaces; ++j) {
            if (!sigs[j] || !(*sigs[i] == *sigs[j])) continue;
            long long na = 0, nb = 0;
            for (int t = i; t < j; ++t)
                (sys.prototile(patch.tiles()[t].proto).label == "a" ? na : nb)++;
            if (na < 1 || nb < 1) continue;
            ObstructionWitness w;
            w.vertex_lo = i;
            w.vertex_hi = j;
            w.position_lo = patch.faces()[i].x;
            w.position_hi = patch.faces()[j].x;
            w.integral_f1 = Scalar(na);
            w.integral_f2 = Scalar::phi() * Scalar(nb);
            // Z meets phi*Z only at zero; both integrals are positive
            if (w.integral_f1 == w.integral_f2)
                fail(ErrorCode::Overflow, "integer equals a positive phi multiple");
            return w;
        }
    }
    fail(ErrorCode::SearchExhausted,
         "no equal-signature vertex pair in this patch; raise the level");
}

inline ObstructionWitness strong_pe_obstruction(double radius, int level = 10) {
    return strong_pe_obstruction(Radius::from_double(radius),
                                 supertile(TilingSystem::fibonacci(), "a", level));
}

/// Values of the four cohomology generators on supertiles. Columns:
/// counting cochain and i_NE - i_SW on NE m-supertiles; the rotated
/// generator i_NW - i_SE on NW m-supertiles (on NE supertiles it
/// vanishes identically by symmetry); and i_NE + i_SW - i_NW - i_SE on
/// the substituted supertile of level max(m, 1), where it is zero.
struct H2TableRow {
    int m = 0;
    Scalar counting;
    Scalar ne_minus_sw;
    Scalar nw_minus_se;
    Scalar balanced;
};

inline std::vector<H2TableRow> chair_h2_table(int m_max) {
    if (m_max < 0) fail(ErrorCode::BadArgument, "m_max must be >= 0");
    const TilingSystem& sys = TilingSystem::chair();
    auto indicator = [&](const std::string& label) {
        std::map<std::string, Scalar> rule;
        for (const Prototile& p : sys.prototiles) rule[p.label] = Scalar(0);
        rule[label] = Scalar(1);
        return mass_cochain(sys, rule);
    };
    TopCochain counting = indicator("NE") + indicator("NW") + indicator("SE") + indicator("SW");
    TopCochain doubling = indicator("NE") - indicator("SW");
    TopCochain rotated = indicator("NW") - indicator("SE");
    TopCochain balanced =
        indicator("NE") + indicator("SW") - indicator("NW") - indicator("SE");
    std::vector<H2TableRow> rows;
    for (int m = 0; m <= m_max; ++m) {
        H2TableRow row;
        row.m = m;
        Patch ne = supertile(sys, "NE", m);
        row.counting = integrate(counting, ne);
        row.ne_minus_sw = integrate(doubling, ne);
        row.nw_minus_se = integrate(rotated, supertile(sys, "NW", m));
        row.balanced = m >= 1 ? integrate(balanced, ne)
                              : integrate(balanced, supertile(sys, "NE", 1));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// One recomputed diagnostic next to its paper expectation.
struct CaseVerdict {
    std::string question;
    bool expected = false;
    bool computed = false;
    std::string evidence;
    bool match() const { return expected == computed; }
};

struct CaseReport {
    std::string name;
    std::vector<std::string> distributions;
    std::vector<CaseVerdict> verdicts;
    bool all_match() const {
        for (const CaseVerdict& v : verdicts)
            if (!v.match()) return false;
        return true;
    }
};

/// Fibonacci case study: every verdict is recomputed from the transport
/// machinery; the fixture only carries the expectations.
inline CaseReport run_fibonacci_case() {
    FibonacciCase c = fibonacci_case();
    const TilingSystem& sys = TilingSystem::fibonacci();
    CaseReport report;
    report.name = "fibonacci";
    report.distributions = {"f1: mass 1 on a tiles, 0 on b tiles",
                            "f2: mass 0 on a tiles, phi on b tiles"};

    // Bounded transport: minimal feasible radius stays constant as the
    // supertile level grows.
    {
        std::vector<Patch> patches;
        for (int level = 5; level <= 8; ++level) patches.push_back(supertile(sys, "a", level));
        std::vector<const Patch*> family;
        for (const Patch& p : patches) family.push_back(&p);
        auto radii = min_transport_radius(c.f1, c.f2, family,
                                          Radius::from_scalar(Scalar::phi() * Scalar(2)));
        bool constant = true;
        std::ostringstream ev;
        ev << "minimal grid radii over levels 5..8:";
        for (const Radius& r : radii) {
            ev << " " << r.grid_index;
            constant = constant && r.grid_index == radii.front().grid_index;
        }
        report.verdicts.push_back(
            {"bounded transport f1 <-> f2", c.expect_bounded, constant, ev.str()});
    }

    // Weak pattern equivariance: the 1-D primitive of f1 - f2 stays
    // below the golden bound on every tested level (bounded primitive).
    {
        TopCochain diff = c.f1 - c.f2;
        bool bounded = true;
        std::ostringstream ev;
        ev << "sup|beta| on levels 8,11,14:";
        for (int level : {8, 11, 14}) {
            Primitive1D prim = primitive_1d(diff, supertile(sys, "a", level));
            bounded = bounded && prim.sup_abs < Scalar::phi();
            ev << " " << prim.sup_abs.to_double();
        }
        ev << " (all < phi = " << Scalar::phi().to_double() << ")";
        report.verdicts.push_back(
            {"weakly PE transport f1 <-> f2", c.expect_weakly_pe, bounded, ev.str()});
    }

    // Strong pattern equivariance: obstruction witnesses at growing
    // collar radii rule it out.
    {
        Patch search = supertile(sys, "a", 9);
        bool obstructed = true;
        std::ostringstream ev;
        for (int k = 0; k <= 3; ++k) {
            try {
                ObstructionWitness w = strong_pe_obstruction(
                    Radius::from_scalar(Scalar::phi_power(k)), search);
                ev << "R=phi^" << k << ": int f1 = " << w.integral_f1.to_double()
                   << " vs int f2 = " << w.integral_f2.to_double() << "; ";
            } catch (const Error&) {
                obstructed = false;
            }
        }
        report.verdicts.push_back({"strongly PE transport f1 <-> f2",
                                   c.expect_strongly_pe, !obstructed, ev.str()});
    }
    return report;
}

/// Chair case study.
inline CaseReport run_chair_case() {
    ChairCase c = chair_case();
    const TilingSystem& sys = TilingSystem::chair();
    CaseReport report;
    report.name = "chair";
    report.distributions = {"f1: mass 2 on NE tiles",
                            "f2: mass 1 on NE and SW tiles",
                            "f3: mass 1 on NW and SE tiles"};

    // f2 <-> f3 via an exact strongly PE coboundary solve.
    {
        Patch sup = supertile(sys, "NE", 3);
        PESolveResult solved = solve_pe_coboundary(c.f2 - c.f3, sup,
                                                   Radius::from_double(2 * std::sqrt(2.0)));
        std::ostringstream ev;
        ev << "residual max = " << solved.residual_max.to_double() << " over "
           << solved.equation_tiles.size() << " interior tiles, "
           << solved.classes.size() << " face classes";
        report.verdicts.push_back({"strongly PE transport f2 <-> f3",
                                   c.expect_f2_f3_strongly_pe, solved.exact(), ev.str()});
    }

    // f1 <-> f2 and f1 <-> f3: the R_n discrepancy ratios grow without
    // bound, and minimal feasible radii grow with the supertile level.
    auto unbounded_family = [&](const TopCochain& a, const TopCochain& b,
                                const std::string& tag, bool expected) {
        TopCochain alpha = a - b;
        std::vector<SeriesTarget> family;
        for (int n = 1; n <= 10; ++n)
            family.push_back({"R_" + std::to_string(n), chair_partial_region(n)});
        auto series = discrepancy_series(alpha, family);
        bool ratios_grow = true;
        for (size_t i = 1; i < series.size(); ++i)
            ratios_grow = ratios_grow && series[i].ratio > series[i - 1].ratio;
        bool exceeds = series.back().ratio > 2.0;

        std::vector<Patch> patches;
        for (int level = 4; level <= 6; ++level) patches.push_back(supertile(sys, "NE", level));
        std::vector<const Patch*> ptrs;
        for (const Patch& p : patches) ptrs.push_back(&p);
        auto radii = min_transport_radius(a, b, ptrs, Radius::from_double(4.0));
        bool radius_grows = true;
        for (size_t i = 1; i < radii.size(); ++i)
            radius_grows = radius_grows && radii[i].grid_index > radii[i - 1].grid_index;

        bool bounded = !(ratios_grow && exceeds && radius_grows);
        std::ostringstream ev;
        ev << "R_n ratios climb to " << series.back().ratio
           << " (>2), minimal radii over levels 4..6:";
        for (const Radius& r : radii) ev << " " << r.grid_index;
        report.verdicts.push_back({"bounded transport " + tag, expected, bounded, ev.str()});
    };
    unbounded_family(c.f1, c.f2, "f1 <-> f2", c.expect_f1_f2_bounded);
    unbounded_family(c.f1, c.f3, "f1 <-> f3", c.expect_f1_f3_bounded);
    return report;
}

} // namespace tiletransport
