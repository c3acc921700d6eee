#pragma once

#include "krich/error.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace krich {

/// The exponent pair (i, j) of the monomial z1^i z2^j.
struct LatticePoint {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// a*i + b*j (sense) c with a, b in {-1, 0, 1}.
struct Constraint {
    enum class Sense { ge, le };
    int a = 0;
    int b = 0;
    Sense sense = Sense::le;
    std::int64_t c = 0;

    bool holds(std::int64_t i, std::int64_t j) const {
        const std::int64_t v = a * i + b * j;
        return sense == Sense::le ? v <= c : v >= c;
    }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Half-open rectangle [i_lo, i_hi) x [j_lo, j_hi).
struct Window {
    std::int64_t i_lo = 0, i_hi = 0, j_lo = 0, j_hi = 0;

    static Window square(std::int64_t lo, std::int64_t hi) { return {lo, hi, lo, hi}; }
    bool contains(std::int64_t i, std::int64_t j) const {
        return i >= i_lo && i < i_hi && j >= j_lo && j < j_hi;
    }
    friend bool operator==(const Window&, const Window&) = default;
};

/// The slice { i : (i, j) in region } at a fixed j.
struct RowInterval {
    enum class Kind { empty, finite, lower_unbounded, upper_unbounded, full };
    Kind kind = Kind::empty;
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    bool contains(std::int64_t i) const {
        switch (kind) {
        case Kind::empty: return false;
        case Kind::finite: return lo <= i && i <= hi;
        case Kind::lower_unbounded: return i <= hi;
        case Kind::upper_unbounded: return i >= lo;
        case Kind::full: return true;
        }
        return false;
    }

    /// Number of integers in the interval, nullopt if infinite.
    std::optional<std::int64_t> size() const {
        if (kind == Kind::empty)
            return 0;
        if (kind == Kind::finite)
            return hi - lo + 1;
        return std::nullopt;
    }

    friend bool operator==(const RowInterval&, const RowInterval&) = default;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

struct Affine {
    std::int64_t slope = 0;
    std::int64_t intercept = 0;
    std::int64_t at(std::int64_t j) const { return slope * j + intercept; }
};

struct Bound {
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;
    bool contains(std::int64_t v) const { return (!lo || v >= *lo) && (!hi || v <= *hi); }
    std::int64_t clamp(std::int64_t v) const {
        if (lo && v < *lo)
            return *lo;
        if (hi && v > *hi)
            return *hi;
        return v;
    }
};

/// A conjunction of a*i + b*j <= c constraints, with i eliminated: rows are
/// [max lowers(j), min uppers(j)] and the feasible j form an integer interval.
class RegionEngine {
  public:
    struct Le {
        int a, b;
        std::int64_t c;
    };

    explicit RegionEngine(const std::vector<Le>& cs) {
        for (const auto& k : cs) {
            if (k.a == 1)
                uppers_.push_back({-k.b, k.c});
            else if (k.a == -1)
                lowers_.push_back({k.b, -k.c});
            else if (k.b == 1)
                tighten_hi(k.c);
            else if (k.b == -1)
                tighten_lo(-k.c);
            else if (k.c < 0)
                empty_ = true;
        }
        for (const auto& l : lowers_)
            for (const auto& u : uppers_) {
                const std::int64_t k = l.slope - u.slope;
                const std::int64_t rhs = u.intercept - l.intercept;
                if (k == 0) {
                    if (rhs < 0)
                        empty_ = true;
                } else if (k > 0) {
                    tighten_hi(floor_div(rhs, k));
                } else {
                    tighten_lo(ceil_div(rhs, k));
                }
            }
        if (j_.lo && j_.hi && *j_.lo > *j_.hi)
            empty_ = true;
    }

    bool empty() const { return empty_; }
    const Bound& j_range() const { return j_; }

    RowInterval row(std::int64_t j) const {
        if (empty_ || !j_.contains(j))
            return {};
        std::optional<std::int64_t> lo, hi;
        for (const auto& l : lowers_)
            lo = lo ? std::max(*lo, l.at(j)) : l.at(j);
        for (const auto& u : uppers_)
            hi = hi ? std::min(*hi, u.at(j)) : u.at(j);
        using K = RowInterval::Kind;
        if (lo && hi)
            return {K::finite, *lo, *hi};
        if (hi)
            return {K::lower_unbounded, 0, *hi};
        if (lo)
            return {K::upper_unbounded, *lo, 0};
        return {K::full, 0, 0};
    }

    struct Support {
        bool unbounded = false;
        std::int64_t value = 0;
        LatticePoint argmax;
    };

    /// max of a*i + b*j over lattice points; requires a nonempty region.
    Support support(int a, int b) const {
        if (a == 0) {
            if (b == 0) {
                const std::int64_t j = j_.clamp(0);
                return {false, 0, {pick_i(j), j}};
            }
            const auto& end = b > 0 ? j_.hi : j_.lo;
            if (!end)
                return {true, 0, {}};
            return {false, b * *end, {pick_i(*end), *end}};
        }
        // a = 1: min over uppers of (b + s) j + t; a = -1: min over lowers of (b - s) j - t.
        std::vector<Affine> pieces;
        for (const auto& f : a == 1 ? uppers_ : lowers_)
            pieces.push_back(a == 1 ? Affine{b + f.slope, f.intercept}
                                    : Affine{b - f.slope, -f.intercept});
        if (pieces.empty())
            return {true, 0, {}};
        auto objective = [&pieces](std::int64_t j) {
            std::int64_t v = pieces.front().at(j);
            for (const auto& p : pieces)
                v = std::min(v, p.at(j));
            return v;
        };
        std::int64_t min_slope = pieces.front().slope, max_slope = min_slope;
        for (const auto& p : pieces) {
            min_slope = std::min(min_slope, p.slope);
            max_slope = std::max(max_slope, p.slope);
        }
        if ((!j_.hi && min_slope > 0) || (!j_.lo && max_slope < 0))
            return {true, 0, {}};
        std::vector<std::int64_t> candidates{j_.clamp(0)};
        if (j_.lo)
            candidates.push_back(*j_.lo);
        if (j_.hi)
            candidates.push_back(*j_.hi);
        for (std::size_t x = 0; x < pieces.size(); ++x)
            for (std::size_t y = x + 1; y < pieces.size(); ++y) {
                const std::int64_t dm = pieces[x].slope - pieces[y].slope;
                if (dm == 0)
                    continue;
                const std::int64_t dq = pieces[y].intercept - pieces[x].intercept;
                candidates.push_back(j_.clamp(floor_div(dq, dm)));
                candidates.push_back(j_.clamp(ceil_div(dq, dm)));
            }
        std::sort(candidates.begin(), candidates.end());
        Support best;
        bool found = false;
        for (std::int64_t j : candidates) {
            const std::int64_t v = objective(j);
            if (!found || v > best.value) {
                found = true;
                best.value = v;
                best.argmax.j = j;
            }
        }
        const RowInterval r = row(best.argmax.j);
        best.argmax.i = a == 1 ? r.hi : r.lo;
        return best;
    }

    /// Smallest |i| + |j| over the region (requires nonempty).
    std::int64_t min_l1() const {
        std::vector<std::int64_t> candidates{j_.clamp(0)};
        if (j_.lo)
            candidates.push_back(*j_.lo);
        if (j_.hi)
            candidates.push_back(*j_.hi);
        auto add_root = [&](const Affine& f, std::int64_t target) {
            if (f.slope == 0)
                return;
            candidates.push_back(j_.clamp(floor_div(target - f.intercept, f.slope)));
            candidates.push_back(j_.clamp(ceil_div(target - f.intercept, f.slope)));
        };
        auto add_cross = [&](const std::vector<Affine>& fs) {
            for (std::size_t x = 0; x < fs.size(); ++x)
                for (std::size_t y = x + 1; y < fs.size(); ++y)
                    add_root(Affine{fs[x].slope - fs[y].slope, fs[x].intercept - fs[y].intercept}, 0);
        };
        for (const auto& f : lowers_)
            add_root(f, 0);
        for (const auto& f : uppers_)
            add_root(f, 0);
        add_cross(lowers_);
        add_cross(uppers_);
        std::optional<std::int64_t> best;
        for (std::int64_t j : candidates) {
            const RowInterval r = row(j);
            if (r.kind == RowInterval::Kind::empty)
                continue;
            std::int64_t di = 0;
            if ((r.kind == RowInterval::Kind::finite || r.kind == RowInterval::Kind::upper_unbounded) &&
                r.lo > 0)
                di = r.lo;
            if ((r.kind == RowInterval::Kind::finite || r.kind == RowInterval::Kind::lower_unbounded) &&
                r.hi < 0)
                di = -r.hi;
            const std::int64_t v = std::abs(j) + di;
            best = best ? std::min(*best, v) : v;
        }
        return best.value_or(0);
    }

  private:
    std::int64_t pick_i(std::int64_t j) const {
        const RowInterval r = row(j);
        switch (r.kind) {
        case RowInterval::Kind::finite: return std::clamp<std::int64_t>(0, r.lo, r.hi);
        case RowInterval::Kind::lower_unbounded: return std::min<std::int64_t>(0, r.hi);
        case RowInterval::Kind::upper_unbounded: return std::max<std::int64_t>(0, r.lo);
        default: return 0;
        }
    }

    void tighten_lo(std::int64_t v) { j_.lo = j_.lo ? std::max(*j_.lo, v) : v; }
    void tighten_hi(std::int64_t v) { j_.hi = j_.hi ? std::min(*j_.hi, v) : v; }

    std::vector<Affine> lowers_;
    std::vector<Affine> uppers_;
    Bound j_;
    bool empty_ = false;
};

inline constexpr std::array<std::array<int, 2>, 8> kDirections{{
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1},
}};

} // namespace detail

/// A monomial subspace of k((z1))((z2)): the lattice points cut out by
/// unit-coefficient half-planes. Constraints are kept in a canonical form
/// (tight, irredundant, in a fixed direction order), so structural equality
/// is equality of point sets.
class LatticeRegion {
  public:
    LatticeRegion() = default;

    static LatticeRegion full(std::string name = {}) {
        LatticeRegion r;
        r.name_ = std::move(name);
        return r;
    }

    static LatticeRegion empty(std::string name = {}) {
        LatticeRegion r;
        r.name_ = std::move(name);
        r.empty_ = true;
        return r;
    }

    static LatticeRegion from_constraints(std::string name, const std::vector<Constraint>& cs) {
        for (const auto& k : cs)
            if (std::abs(k.a) > 1 || std::abs(k.b) > 1)
                throw Error(ErrorCode::invalid_argument,
                            "constraint coefficients must lie in {-1, 0, 1}");
        LatticeRegion r;
        r.name_ = std::move(name);
        r.normalize(to_le(cs));
        return r;
    }

    const std::string& name() const { return name_; }
    LatticeRegion named(std::string name) const {
        LatticeRegion r = *this;
        r.name_ = std::move(name);
        return r;
    }

    bool is_empty() const { return empty_; }
    bool is_full() const { return !empty_ && constraints_.empty(); }
    const std::vector<Constraint>& constraints() const { return constraints_; }

    bool contains(std::int64_t i, std::int64_t j) const {
        if (empty_)
            return false;
        for (const auto& k : constraints_)
            if (!k.holds(i, j))
                return false;
        return true;
    }
    bool contains(const LatticePoint& p) const { return contains(p.i, p.j); }

    RowInterval row(std::int64_t j) const {
        if (empty_)
            return {};
        return engine().row(j);
    }

    /// Lattice maximum of a*i + b*j with a maximiser; nullopt when unbounded.
    /// Requires a nonempty region.
    std::optional<std::pair<std::int64_t, LatticePoint>> support(int a, int b) const {
        if (empty_)
            throw Error(ErrorCode::invalid_argument, "support of the empty region");
        const auto s = engine().support(a, b);
        if (s.unbounded)
            return std::nullopt;
        return std::make_pair(s.value, s.argmax);
    }

    /// Number of lattice points, nullopt if infinite.
    std::optional<std::int64_t> count() const {
        if (empty_)
            return 0;
        const auto e = engine();
        const auto& jr = e.j_range();
        if (!jr.lo || !jr.hi)
            return std::nullopt;
        std::int64_t total = 0;
        for (std::int64_t j = *jr.lo; j <= *jr.hi; ++j) {
            const auto n = e.row(j).size();
            if (!n)
                return std::nullopt;
            total += *n;
        }
        return total;
    }

    /// The point minimising (|i| + |j|, i, j), if any.
    std::optional<LatticePoint> nearest_point() const {
        if (empty_)
            return std::nullopt;
        const std::int64_t r = engine().min_l1();
        for (std::int64_t i = -r; i <= r; ++i) {
            const std::int64_t rest = r - std::abs(i);
            if (contains(i, -rest))
                return LatticePoint{i, -rest};
            if (rest != 0 && contains(i, rest))
                return LatticePoint{i, rest};
        }
        throw Error(ErrorCode::invalid_argument, "nearest point search failed");
    }

    /// Disjoint regions whose union is the complement.
    std::vector<LatticeRegion> complement() const {
        if (empty_)
            return {full()};
        std::vector<LatticeRegion> pieces;
        std::vector<Constraint> prefix;
        for (const auto& k : constraints_) {
            Constraint flipped = k;
            if (k.sense == Constraint::Sense::le) {
                flipped.sense = Constraint::Sense::ge;
                flipped.c = k.c + 1;
            } else {
                flipped.sense = Constraint::Sense::le;
                flipped.c = k.c - 1;
            }
            auto cs = prefix;
            cs.push_back(flipped);
            LatticeRegion piece = from_constraints({}, cs);
            if (!piece.is_empty())
                pieces.push_back(std::move(piece));
            prefix.push_back(k);
        }
        return pieces;
    }

    friend bool operator==(const LatticeRegion& a, const LatticeRegion& b) {
        return a.empty_ == b.empty_ && a.constraints_ == b.constraints_;
    }

    /// "{i >= 0, i + j <= 0}".
    std::string to_string() const {
        if (empty_)
            return "{}";
        std::string out = "{";
        for (std::size_t n = 0; n < constraints_.size(); ++n) {
            const auto& k = constraints_[n];
            if (n)
                out += ", ";
            std::string lhs;
            auto term = [&lhs](int coef, const char* v) {
                if (coef == 0)
                    return;
                if (lhs.empty())
                    lhs += coef < 0 ? "-" : "";
                else
                    lhs += coef < 0 ? " - " : " + ";
                lhs += v;
            };
            term(k.a, "i");
            term(k.b, "j");
            out += lhs + (k.sense == Constraint::Sense::le ? " <= " : " >= ") + std::to_string(k.c);
        }
        return out + "}";
    }

  private:
    using Le = detail::RegionEngine::Le;

    static std::vector<Le> to_le(const std::vector<Constraint>& cs) {
        std::vector<Le> out;
        for (const auto& k : cs) {
            if (k.sense == Constraint::Sense::le)
                out.push_back({k.a, k.b, k.c});
            else
                out.push_back({-k.a, -k.b, -k.c});
        }
        return out;
    }

    detail::RegionEngine engine() const { return detail::RegionEngine(to_le(constraints_)); }

    void normalize(const std::vector<Le>& input) {
        constraints_.clear();
        const detail::RegionEngine e(input);
        if (e.empty()) {
            empty_ = true;
            return;
        }
        // Tight support in each of the eight unit directions.
        std::vector<Le> tight;
        for (const auto& [a, b] : detail::kDirections) {
            const auto s = e.support(a, b);
            if (!s.unbounded)
                tight.push_back({a, b, s.value});
        }
        // Drop, in direction order, every constraint implied by the others.
        for (std::size_t k = 0; k < tight.size();) {
            std::vector<Le> rest = tight;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            const auto s = detail::RegionEngine(rest).support(tight[k].a, tight[k].b);
            if (!s.unbounded && s.value == tight[k].c)
                tight = std::move(rest);
            else
                ++k;
        }
        for (const auto& k : tight) {
            // Display with a positive leading coefficient.
            const bool flip = k.a < 0 || (k.a == 0 && k.b < 0);
            if (flip)
                constraints_.push_back({-k.a, -k.b, Constraint::Sense::ge, -k.c});
            else
                constraints_.push_back({k.a, k.b, Constraint::Sense::le, k.c});
        }
    }

    std::string name_;
    std::vector<Constraint> constraints_;
    bool empty_ = false;
};

inline LatticeRegion intersect(const LatticeRegion& a, const LatticeRegion& b) {
    std::string name = a.name().empty() || b.name().empty() ? std::string{}
                                                            : a.name() + "&" + b.name();
    if (a.is_empty() || b.is_empty())
        return LatticeRegion::empty(std::move(name));
    auto cs = a.constraints();
    cs.insert(cs.end(), b.constraints().begin(), b.constraints().end());
    return LatticeRegion::from_constraints(std::move(name), cs);
}

/// Region points inside the window, in lexicographic (i, j) order.
inline std::vector<LatticePoint> window_points(const LatticeRegion& r, const Window& w) {
    std::vector<LatticePoint> out;
    if (r.is_empty())
        return out;
    for (std::int64_t i = w.i_lo; i < w.i_hi; ++i)
        for (std::int64_t j = w.j_lo; j < w.j_hi; ++j)
            if (r.contains(i, j))
                out.push_back({i, j});
    return out;
}

inline Constraint ge(int a, int b, std::int64_t c) { return {a, b, Constraint::Sense::ge, c}; }
inline Constraint le(int a, int b, std::int64_t c) { return {a, b, Constraint::Sense::le, c}; }

/// The six rings of the restricted adelic complex of O(dC) on the P^2 chart
/// (u <-> i, t <-> j). Only the C-side constraint i + j <= d moves with d.
struct StandardRings {
    LatticeRegion b_p;   // k[[u]]((t))
    LatticeRegion b_c;   // k[u^-1]((u^-1 t)), twisted
    LatticeRegion o_pc;  // k((u))[[t]]
    LatticeRegion a;     // k[u t^-1, t^-1], twisted
    LatticeRegion a_c;   // k[u^-1][[u^-1 t]], twisted
    LatticeRegion o_p;   // k[[u, t]]

    /// Fixed order used by diagrams and bitmasks.
    std::array<const LatticeRegion*, 6> all() const { return {&b_p, &b_c, &o_pc, &a, &a_c, &o_p}; }
};

inline StandardRings standard_rings(std::int64_t d) {
    using R = LatticeRegion;
    return {
        R::from_constraints("B_P", {ge(1, 0, 0)}),
        R::from_constraints("B_C", {le(1, 1, d)}),
        R::from_constraints("O_PC", {ge(0, 1, 0)}),
        R::from_constraints("A", {ge(1, 0, 0), le(1, 1, d)}),
        R::from_constraints("A_C", {le(1, 1, d), ge(0, 1, 0)}),
        R::from_constraints("O_P", {ge(1, 0, 0), ge(0, 1, 0)}),
    };
}

/// K(n) = z2^n K12: the half-plane j >= n.
inline LatticeRegion filtration_region(std::int64_t n) {
    return LatticeRegion::from_constraints("K(" + std::to_string(n) + ")", {ge(0, 1, n)});
}

/// Componentwise twists (d_1, ..., d_r) of V = K^r.
struct RankProfile {
    std::vector<std::int64_t> twists{0};

    explicit RankProfile(std::vector<std::int64_t> t = {0}) : twists(std::move(t)) {
        if (twists.empty())
            throw Error(ErrorCode::invalid_argument, "rank profile needs at least one summand");
    }
    std::size_t rank() const { return twists.size(); }
    friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

} // namespace krich
