#pragma once

#include "bohr/backend.hpp"
#include "bohr/errors.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace bohr {

/// Nonempty compact interval [lo, hi], the value domain of interval-valued
/// observable readings.
template <class B>
struct Interval {
    typename B::Real lo;
    typename B::Real hi;
};

/// One piece of an outcome set: a rational interval with open/closed endpoint
/// flags. An absent endpoint means unbounded on that side (always open).
struct RatInterval {
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    bool lo_open = false;
    bool hi_open = false;

    bool empty() const {
        if (!lo || !hi) return false;
        if (*lo > *hi) return true;
        return *lo == *hi && (lo_open || hi_open);
    }
};

/// A finite union of disjoint rational intervals, kept sorted and with
/// touching pieces merged, so that each stored piece is a genuine connected
/// component of the set.
class OutcomeSet {
  public:
    OutcomeSet() = default;

    explicit OutcomeSet(std::vector<RatInterval> parts) {
        parts.erase(std::remove_if(parts.begin(), parts.end(),
                                   [](const RatInterval& p) { return p.empty(); }),
                    parts.end());
        std::sort(parts.begin(), parts.end(), [](const RatInterval& a, const RatInterval& b) {
            if (!a.lo) return bool(b.lo);
            if (!b.lo) return false;
            if (*a.lo != *b.lo) return *a.lo < *b.lo;
            return !a.lo_open && b.lo_open;
        });
        for (const RatInterval& p : parts) {
            if (!parts_.empty() && touches(parts_.back(), p)) {
                merge_into(parts_.back(), p);
            } else {
                parts_.push_back(p);
            }
        }
    }

    static OutcomeSet empty() { return OutcomeSet(); }
    static OutcomeSet reals() {
        return OutcomeSet({RatInterval{std::nullopt, std::nullopt, true, true}});
    }
    static OutcomeSet point(const Rational& x) { return OutcomeSet({RatInterval{x, x}}); }
    static OutcomeSet open(const Rational& lo, const Rational& hi) {
        return OutcomeSet({RatInterval{lo, hi, true, true}});
    }
    static OutcomeSet closed(const Rational& lo, const Rational& hi) {
        return OutcomeSet({RatInterval{lo, hi, false, false}});
    }

    const std::vector<RatInterval>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }

    /// Membership of a point. The exact backend compares endpoints literally;
    /// the float backend resolves a value within epsilon of an endpoint toward
    /// inclusion for a closed endpoint and exclusion for an open one.
    template <class B>
    bool contains(const typename B::Real& x) const {
        for (const RatInterval& p : parts_)
            if (part_contains<B>(p, x)) return true;
        return false;
    }

    /// True iff the whole compact interval [lo, hi] lies inside the set.
    /// Pieces are connected components, so this reduces to both endpoints
    /// landing in the same piece.
    template <class B>
    bool contains_interval(const typename B::Real& lo, const typename B::Real& hi) const {
        for (const RatInterval& p : parts_)
            if (part_contains<B>(p, lo) && part_contains<B>(p, hi)) return true;
        return false;
    }

  private:
    template <class B>
    static bool part_contains(const RatInterval& p, const typename B::Real& x) {
        if constexpr (B::exact) {
            if (p.lo) {
                if (x < *p.lo) return false;
                if (x == *p.lo && p.lo_open) return false;
            }
            if (p.hi) {
                if (x > *p.hi) return false;
                if (x == *p.hi && p.hi_open) return false;
            }
            return true;
        } else {
            double eps = B::epsilon;
            if (p.lo) {
                double lo = RationalBackend::to_double(*p.lo);
                if (std::abs(x - lo) <= eps) return !p.lo_open;
                if (x < lo) return false;
            }
            if (p.hi) {
                double hi = RationalBackend::to_double(*p.hi);
                if (std::abs(x - hi) <= eps) return !p.hi_open;
                if (x > hi) return false;
            }
            return true;
        }
    }

    // a precedes b in the sort order; they touch when their union is connected.
    static bool touches(const RatInterval& a, const RatInterval& b) {
        if (!a.hi || !b.lo) return true;
        if (*a.hi > *b.lo) return true;
        if (*a.hi < *b.lo) return false;
        return !(a.hi_open && b.lo_open);
    }

    static void merge_into(RatInterval& a, const RatInterval& b) {
        if (!b.hi) {
            a.hi.reset();
            a.hi_open = true;
            return;
        }
        if (a.hi && (*b.hi > *a.hi || (*b.hi == *a.hi && !b.hi_open))) {
            a.hi = b.hi;
            a.hi_open = b.hi_open;
        }
    }

    std::vector<RatInterval> parts_;
};

} // namespace bohr
