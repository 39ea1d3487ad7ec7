#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adetau/scalar.hpp"

namespace adetau {

// ---- Theorem 1 renormalizations of tau_{A4} ----

struct ABC {
    Rat a, b, c;
};

inline ABC normalize_abc(int g, const Rat& tau) {
    if (g < 0) throw std::invalid_argument("normalize_abc: g must be nonnegative");
    int k = g % 5;
    long n = (g + 4) / 5;
    Rat f1(1, 5), f2(2, 5), f3(3, 5), f4(4, 5);
    switch (k) {
        case 0:
            n = g / 5;
            return {-Rat(1, 5) * poch_signed(f4, 2 * n - 1) * tau, poch_signed(f4, n) * poch_signed(f1, n) * tau,
                    poch_signed(f4, n) * poch_signed(f3, n) * tau};
        case 4:
            return {-Rat(1, 5) * poch_signed(f2, 2 * n - 1) * tau, poch_signed(f2, n) * poch_signed(f3, n) * tau,
                    poch_signed(f2, n) * poch_signed(f4, n) * tau};
        case 2:
            return {Rat(1, 5) * poch_signed(f3, 2 * n - 2) * tau, poch_signed(f3, n - 1) * poch_signed(f2, n) * tau,
                    poch_signed(f3, n - 1) * poch_signed(f1, n) * tau};
        case 1:
            return {Rat(1, 5) * poch_signed(f1, 2 * n - 2) * tau, poch_signed(f1, n) * poch_signed(f4, n - 1) * tau,
                    poch_signed(f1, n) * poch_signed(f2, n - 1) * tau};
        default:
            return {Rat(0), Rat(0), Rat(0)};
    }
}

// a_g = ((-1)^m / 5) (A)_m tau_g with m = [(2g-1)/5], A = {(2g-1)/5}.
inline Rat normalize_a_uniform(int g, const Rat& tau) {
    auto fp = frac_int(2L * g - 1, 5);
    if (fp.A.is_zero()) return Rat(0);
    long m = fp.m.get_si();
    Rat s = (m % 2 == 0) ? Rat(1) : Rat(-1);
    return s / Rat(5) * poch_signed(fp.A, m) * tau;
}

inline bool in_ring_Z_inv(const Rat& q, const std::vector<long>& allowed_primes) {
    if (q.is_zero()) return true;
    Int d = q.den();
    for (long p : allowed_primes) {
        Int pp(p);
        while (mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t())) d /= pp;
    }
    return d == 1;
}

inline std::vector<Int> primes_outside(const Rat& q, const std::vector<long>& allowed_primes) {
    std::vector<Int> out;
    if (q.is_zero()) return out;
    for (auto& [p, e] : factor_int(q.den()))
        if (std::find(allowed_primes.begin(), allowed_primes.end(), p.get_si()) == allowed_primes.end())
            out.push_back(p);
    return out;
}

// c_g^{[s]}; zero for g = 3 (mod 5), where c_g vanishes.
inline Rat cg_summand(int g, int s) {
    if (g < 0 || s < 0 || 2 * s > g) throw std::out_of_range("cg_summand: need 0 <= s <= g/2");
    int k = g % 5;
    long n = (g + 4) / 5;
    Rat base = pow(Rat(5), -2L * s) / Rat(Int(factorial(s) * factorial(g - 2L * s)));
    Rat f1(1, 5), f2(2, 5), f3(3, 5), f4(4, 5);
    switch (k) {
        case 0:
            n = g / 5;
            return base * poch_asc(f3, n) * poch_asc(f4, n) * poch_asc(f1, 3 * n - s);
        case 4: return base * poch_asc(f2, n) * poch_asc(f4, n) * poch_asc(f3, 3 * n - 1 - s);
        case 2: return base * poch_asc(f3, n - 1) * poch_asc(f1, n) * poch_asc(f2, 3 * n - 2 - s);
        case 1: return base * poch_asc(f1, n) * poch_asc(f2, n - 1) * poch_asc(f4, 3 * n - 3 - s);
        default: return Rat(0);
    }
}

// c_g = 6^{-g} sum_s 2^{-2s} (-9)^s c_g^{[s]}.
inline Rat cg_assembled(int g) {
    Rat acc(0);
    for (int s = 0; 2 * s <= g; ++s) acc += pow(Rat(-9, 4), s) * cg_summand(g, s);
    return acc * pow(Rat(6), -static_cast<long>(g));
}

struct IntegralityRow {
    int g;
    Rat tau;
    ABC abc;
    std::vector<Int> flagged;
};

inline std::vector<IntegralityRow> integrality_report(const std::vector<Rat>& tau) {
    const std::vector<long> allowed{2, 3, 5};
    std::vector<IntegralityRow> rows;
    for (int g = 0; g < static_cast<int>(tau.size()); ++g) {
        IntegralityRow row{g, tau[g], normalize_abc(g, tau[g]), {}};
        std::set<Int> fl;
        for (const Rat* v : {&row.abc.a, &row.abc.b, &row.abc.c})
            if (!in_ring_Z_inv(*v, allowed))
                for (auto& p : primes_outside(*v, allowed)) fl.insert(p);
        row.flagged.assign(fl.begin(), fl.end());
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- floor-function line arrangements ----

struct AffineForm {
    long a, b;
    Rat c;
    int sign;
};

struct FloorFuncSpec {
    std::string name;
    std::vector<AffineForm> forms;

    Int value(const Rat& x, const Rat& y) const {
        Int v(0);
        for (auto& f : forms) {
            Int fl = floor_int(Rat(f.a) * x + Rat(f.b) * y + f.c);
            v += f.sign > 0 ? fl : Int(-fl);
        }
        return v;
    }
    bool periodic() const {
        long sa = 0, sb = 0;
        for (auto& f : forms) {
            sa += f.sign * f.a;
            sb += f.sign * f.b;
        }
        return sa == 0 && sb == 0;
    }
};

namespace detail {

// [x + p] + [x + q] + [3x - y + t] - [y] - [5x - 2y]
inline FloorFuncSpec quintic_floor_spec(const std::string& name, long p, long q, long t) {
    return {name,
            {{1, 0, Rat(p, 5), 1}, {1, 0, Rat(q, 5), 1}, {3, -1, Rat(t, 5), 1}, {0, 1, Rat(0), -1}, {5, -2, Rat(0), -1}}};
}

}  // namespace detail

inline FloorFuncSpec f_spec(int j) {
    switch (j) {
        case 1: return detail::quintic_floor_spec("f1", 2, 1, 4);
        case 2: return detail::quintic_floor_spec("f2", 1, 3, 2);
        case 3: return detail::quintic_floor_spec("f3", 4, 2, 3);
        case 4: return detail::quintic_floor_spec("f4", 3, 4, 1);
    }
    throw std::out_of_range("f_spec: index must be 1..4");
}

inline FloorFuncSpec g_spec(int j) {
    switch (j) {
        case 1: return detail::quintic_floor_spec("g1", 1, 4, 4);
        case 2: return detail::quintic_floor_spec("g2", 3, 2, 2);
        case 3: return detail::quintic_floor_spec("g3", 2, 3, 3);
        case 4: return detail::quintic_floor_spec("g4", 4, 1, 1);
    }
    throw std::out_of_range("g_spec: index must be 1..4");
}

struct Point2 {
    Rat x, y;
    friend bool operator<(const Point2& p, const Point2& q) { return p.x != q.x ? p.x < q.x : p.y < q.y; }
    friend bool operator==(const Point2& p, const Point2& q) { return p.x == q.x && p.y == q.y; }
};

struct Cell {
    std::vector<Point2> vertices;  // convex hull, counterclockwise
    Point2 interior;
    Int value;
};

struct ArrangementResult {
    Int min, max;
    std::vector<Cell> cells;
};

namespace detail {

// y = p + s x
struct SlopedLine {
    Rat p, s;
    Rat at(const Rat& x) const { return p + s * x; }
    friend bool operator<(const SlopedLine& a, const SlopedLine& b) { return a.p != b.p ? a.p < b.p : a.s < b.s; }
    friend bool operator==(const SlopedLine& a, const SlopedLine& b) { return a.p == b.p && a.s == b.s; }
};

inline Rat cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Exact cells of the break-line arrangement of spec inside the open unit square.
inline ArrangementResult arrangement_analyze(const FloorFuncSpec& spec) {
    using detail::SlopedLine;
    if (!spec.periodic()) throw std::invalid_argument("arrangement_analyze: spec is not doubly periodic");
    const Rat zero(0), one(1);
    std::set<Rat> verticals;
    std::set<SlopedLine> sloped{{zero, zero}, {one, zero}};
    for (auto& f : spec.forms) {
        if (f.a == 0 && f.b == 0) throw std::invalid_argument("arrangement_analyze: constant form has no break lines");
        Rat c00 = f.c, c10 = Rat(f.a) + f.c, c01 = Rat(f.b) + f.c, c11 = Rat(f.a + f.b) + f.c;
        Rat lo = std::min({c00, c10, c01, c11}), hi = std::max({c00, c10, c01, c11});
        Int klo = floor_int(lo), khi = floor_int(hi);
        for (Int k = klo; k <= khi; ++k) {
            if (f.b == 0) {
                Rat x = (Rat(k) - f.c) / Rat(f.a);
                if (zero < x && x < one) verticals.insert(x);
            } else {
                sloped.insert({(Rat(k) - f.c) / Rat(f.b), -Rat(f.a) / Rat(f.b)});
            }
        }
    }
    std::vector<SlopedLine> lines(sloped.begin(), sloped.end());
    std::set<Rat> xs{zero, one};
    for (auto& v : verticals) xs.insert(v);
    for (size_t i = 0; i < lines.size(); ++i)
        for (size_t j = i + 1; j < lines.size(); ++j) {
            if (lines[i].s == lines[j].s) continue;
            Rat x = (lines[j].p - lines[i].p) / (lines[i].s - lines[j].s);
            if (zero < x && x < one) xs.insert(x);
        }
    std::vector<Rat> bx(xs.begin(), xs.end());

    struct Piece {
        size_t strip;
        SlopedLine lo, hi;
    };
    std::vector<Piece> pieces;
    std::vector<std::vector<int>> strip_pieces(bx.size() - 1);
    for (size_t k = 0; k + 1 < bx.size(); ++k) {
        Rat xm = (bx[k] + bx[k + 1]) / Rat(2);
        std::vector<std::pair<Rat, size_t>> inside;
        for (size_t i = 0; i < lines.size(); ++i) {
            Rat y = lines[i].at(xm);
            if (zero <= y && y <= one) inside.push_back({y, i});
        }
        std::sort(inside.begin(), inside.end());
        for (size_t i = 0; i + 1 < inside.size(); ++i) {
            if (inside[i].first == inside[i + 1].first)
                throw std::logic_error("arrangement_analyze: two break lines meet inside a strip");
            strip_pieces[k].push_back(static_cast<int>(pieces.size()));
            pieces.push_back({k, lines[inside[i].second], lines[inside[i + 1].second]});
        }
    }
    detail::UnionFind uf(static_cast<int>(pieces.size()));
    for (size_t k = 1; k + 1 < bx.size(); ++k) {
        if (verticals.count(bx[k])) continue;
        const Rat& x = bx[k];
        for (int a : strip_pieces[k - 1])
            for (int b : strip_pieces[k]) {
                Rat lo = std::max(pieces[a].lo.at(x), pieces[b].lo.at(x));
                Rat hi = std::min(pieces[a].hi.at(x), pieces[b].hi.at(x));
                if (lo < hi) uf.unite(a, b);
            }
    }
    std::map<int, std::vector<Point2>> corners;
    std::map<int, std::vector<Point2>> mids;
    for (size_t i = 0; i < pieces.size(); ++i) {
        auto& P = pieces[i];
        const Rat& x0 = bx[P.strip];
        const Rat& x1 = bx[P.strip + 1];
        int root = uf.find(static_cast<int>(i));
        auto& cs = corners[root];
        cs.push_back({x0, P.lo.at(x0)});
        cs.push_back({x0, P.hi.at(x0)});
        cs.push_back({x1, P.lo.at(x1)});
        cs.push_back({x1, P.hi.at(x1)});
        Rat xm = (x0 + x1) / Rat(2);
        mids[root].push_back({xm, (P.lo.at(xm) + P.hi.at(xm)) / Rat(2)});
    }
    ArrangementResult res;
    bool first = true;
    for (auto& [root, cs] : corners) {
        Cell cell;
        cell.vertices = detail::convex_hull(cs);
        Rat sx(0), sy(0);
        for (auto& v : cell.vertices) {
            sx += v.x;
            sy += v.y;
        }
        Rat nv(static_cast<long>(cell.vertices.size()));
        cell.interior = {sx / nv, sy / nv};
        cell.value = spec.value(cell.interior.x, cell.interior.y);
        for (auto& m : mids[root])
            if (spec.value(m.x, m.y) != cell.value)
                throw std::logic_error("arrangement_analyze: value is not constant on a cell of " + spec.name);
        if (first || cell.value < res.min) res.min = cell.value;
        if (first || cell.value > res.max) res.max = cell.value;
        first = false;
        res.cells.push_back(std::move(cell));
    }
    std::sort(res.cells.begin(), res.cells.end(),
              [](const Cell& a, const Cell& b) { return a.interior < b.interior; });
    return res;
}

inline nlohmann::ordered_json arrangement_to_json(const ArrangementResult& r) {
    nlohmann::ordered_json j;
    j["cells"] = nlohmann::ordered_json::array();
    for (auto& c : r.cells) {
        auto vs = nlohmann::ordered_json::array();
        for (auto& v : c.vertices) vs.push_back({v.x.str(), v.y.str()});
        j["cells"].push_back({{"vertices", vs}, {"value", c.value.get_str()}});
    }
    j["min"] = r.min.get_str();
    j["max"] = r.max.get_str();
    return j;
}

}  // namespace adetau
