#include "qtheta/io.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace qtheta::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

const json& field(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "' in " + where);
    return *it;
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

// scalars whose rational form is this long stop being tracked exactly
constexpr size_t kExactDigitLimit = 64;

}  // namespace

std::string double_to_string(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

bool decimal_to_rational(const std::string& s, mpq_class& out) {
    // [sign] digits [. digits] [eE [sign] digits]
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    long frac_digits = 0, exponent = 0;
    bool any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        digits += s[i++];
        any = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits += s[i++];
            ++frac_digits;
            any = true;
        }
    }
    if (!any) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i >= s.size()) return false;
        long e = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            e = e * 10 + (s[i++] - '0');
            if (e > 100000) return false;
        }
        exponent = eneg ? -e : e;
    }
    if (i != s.size()) return false;
    if (digits.size() > kExactDigitLimit) return false;
    mpz_class mant(digits, 10);
    mpq_class q(mant);
    long net = exponent - frac_digits;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    if (net >= 0)
        q *= mpq_class(p10);
    else
        q /= mpq_class(p10);
    q.canonicalize();
    out = neg ? mpq_class(-q) : q;
    return true;
}

namespace {

// "n/d" or decimal literal; exact when possible
PosReal posreal_from_string(const std::string& s, const Backend& b, const char* where) {
    if (s.find('/') != std::string::npos) {
        mpq_class q(s);
        q.canonicalize();
        return PosReal::from_q(q, b.prec);
    }
    mpq_class q;
    if (decimal_to_rational(s, q)) return PosReal::from_q(q, b.prec);
    BigFloat f(b.prec);
    if (!BigFloat::parse(s, b.prec, f)) fail(std::string("malformed scalar literal in ") + where);
    return PosReal::from_f(std::move(f));
}

Turns turns_from_string(const std::string& s, const Backend& b, const char* where) {
    if (s.find('/') != std::string::npos) {
        mpq_class q(s);
        q.canonicalize();
        return Turns::from_q(q);
    }
    mpq_class q;
    if (decimal_to_rational(s, q)) return Turns::from_q(q);
    BigFloat f(b.prec);
    if (!BigFloat::parse(s, b.prec, f)) fail(std::string("malformed turns literal in ") + where);
    return Turns::from_f(f);
}

std::string posreal_to_string(const PosReal& r) {
    if (r.exact) return rational_str(r.q);
    return r.approx.to_string();
}

std::string turns_to_string(const Turns& t) {
    if (t.exact) return rational_str(t.q);
    return t.f.to_string();
}

}  // namespace

json backend_to_json(const Backend& b) {
    json j;
    if (b.field == Field::Complex) {
        j["backend"] = "complex";
        j["prec"] = static_cast<long>(b.prec);
    } else {
        j["backend"] = "padic";
        j["p"] = b.prime;
        j["prec"] = static_cast<long>(b.prec);
    }
    return j;
}

Backend backend_from_json(const json& j) {
    std::string kind = field(j, "backend", "config").get<std::string>();
    long prec = j.value("prec", 256L);
    if (kind == "complex") return Backend::complex_field(prec);
    if (kind == "padic") return Backend::padic_field(field(j, "p", "config").get<long>(), prec);
    fail("unknown backend '" + kind + "'");
}

json scalar_to_json(const Scalar& s) {
    json j;
    if (s.backend().field == Field::Complex) {
        j["abs"] = posreal_to_string(s.abs_part());
        j["turns"] = turns_to_string(s.turns_part());
    } else {
        j["rat"] = rational_str(s.rat());
        j["p"] = s.backend().prime;
    }
    return j;
}

Scalar scalar_from_json(const json& j, const Backend& b, const char* where) {
    if (!j.is_object()) fail(std::string("scalar must be an object in ") + where);
    if (b.field == Field::Complex) {
        std::string abs = field(j, "abs", where).get<std::string>();
        std::string turns = field(j, "turns", where).get<std::string>();
        return Scalar::from_polar(b, posreal_from_string(abs, b, where),
                                  turns_from_string(turns, b, where));
    }
    std::string rat = field(j, "rat", where).get<std::string>();
    mpq_class q(rat);
    q.canonicalize();
    if (j.contains("p") && j["p"].get<long>() != b.prime)
        fail(std::string("scalar prime differs from the configured backend in ") + where);
    return Scalar::from_rational(b, q);
}

json coeff_to_json(const Coefficient& c) {
    json j;
    if (c.backend().field == Field::Complex) {
        if (c.is_zero()) {
            j["abs"] = "0";
            j["turns"] = "0";
        } else {
            j["abs"] = posreal_to_string(c.abs_part());
            j["turns"] = turns_to_string(c.turns_part());
        }
    } else {
        j["rat"] = c.is_zero() ? "0" : rational_str(c.rat());
        j["p"] = c.backend().prime;
    }
    return j;
}

Coefficient coeff_from_json(const json& j, const Backend& b, const char* where) {
    if (b.field == Field::Complex) {
        std::string abs = field(j, "abs", where).get<std::string>();
        if (abs == "0" || abs == "0/1") return Coefficient::zero(b);
        std::string turns = field(j, "turns", where).get<std::string>();
        return Coefficient::from_polar(b, posreal_from_string(abs, b, where),
                                       turns_from_string(turns, b, where));
    }
    std::string rat = field(j, "rat", where).get<std::string>();
    mpq_class q(rat);
    q.canonicalize();
    return Coefficient::from_rational(b, q);
}

json intmat_to_json(const IntMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

IntMat intmat_from_json(const json& j, const char* where) {
    if (!j.is_array()) fail(std::string("matrix must be an array of rows in ") + where);
    std::vector<IntVec> rows;
    for (const json& r : j) {
        if (!r.is_array()) fail(std::string("matrix rows must be arrays in ") + where);
        IntVec row;
        for (const json& x : r) row.push_back(x.get<long long>());
        rows.push_back(std::move(row));
    }
    return IntMat::from_rows(rows);
}

json torus_to_json(const NCTorus& t) {
    json j;
    j["rank"] = t.rank();
    json alpha;
    json off = json::array();
    for (int i = 0; i < t.rank(); ++i)
        for (int k = i + 1; k < t.rank(); ++k)
            off.push_back(json::array({i, k, scalar_to_json(t.alpha().offdiag(i, k))}));
    alpha["offdiag"] = std::move(off);
    json diag = json::array();
    for (int i = 0; i < t.rank(); ++i) diag.push_back(t.alpha().diag(i));
    alpha["diag"] = std::move(diag);
    j["alpha"] = std::move(alpha);
    return j;
}

TorusPtr torus_from_json(const json& j, const Backend& b) {
    int rank = field(j, "rank", "torus").get<int>();
    if (rank < 0) fail("torus rank must be nonnegative");
    std::vector<Scalar> off(static_cast<size_t>(rank) * (rank - 1) / 2, Scalar::one(b));
    std::vector<int> diag(static_cast<size_t>(rank), 1);
    if (j.contains("alpha")) {
        const json& a = j["alpha"];
        if (a.contains("offdiag")) {
            for (const json& e : a["offdiag"]) {
                if (!e.is_array() || e.size() != 3) fail("alpha offdiag entries must be [i, j, scalar]");
                int i = e[0].get<int>(), k = e[1].get<int>();
                if (!(0 <= i && i < k && k < rank)) fail("alpha offdiag index out of range");
                size_t pos = static_cast<size_t>(i) * (2 * rank - i - 1) / 2 + (k - i - 1);
                off[pos] = scalar_from_json(e[2], b, "alpha.offdiag");
            }
        }
        if (a.contains("diag")) {
            auto d = a["diag"];
            if (d.size() != static_cast<size_t>(rank)) fail("alpha diag has wrong length");
            for (int i = 0; i < rank; ++i) diag[i] = d[i].get<int>();
        }
    }
    return make_torus(AlternatingPairing(b, rank, std::move(off), std::move(diag)));
}

json periods_to_json(const PeriodLattice& p) {
    json points = json::array();
    for (int jx = 0; jx < p.rank(); ++jx) {
        json pt = json::array();
        for (int i = 0; i < p.torus()->rank(); ++i)
            pt.push_back(scalar_to_json(p.basis_point(jx).value(i)));
        points.push_back(std::move(pt));
    }
    json j;
    j["points"] = std::move(points);
    return j;
}

PeriodsPtr periods_from_json(const json& j, const TorusPtr& torus) {
    const Backend& b = torus->backend();
    std::vector<CharacterPoint> pts;
    for (const json& pt : field(j, "points", "periods")) {
        std::vector<Scalar> vals;
        for (const json& v : pt) vals.push_back(scalar_from_json(v, b, "period point"));
        pts.emplace_back(b, std::move(vals));
    }
    return std::make_shared<const PeriodLattice>(torus, std::move(pts));
}

json multiplier_to_json(const ThetaMultiplier& L) {
    json j;
    j["h_l"] = intmat_to_json(L.h_l());
    j["h_r"] = intmat_to_json(L.h_r());
    json psi = json::array();
    for (const Scalar& s : L.psi_basis()) psi.push_back(scalar_to_json(s));
    j["psi"] = std::move(psi);
    json table = json::array();
    int m = L.pairing().rank();
    for (int i = 0; i < m; ++i)
        for (int k = i; k < m; ++k)
            table.push_back(json::array({i, k, scalar_to_json(L.pairing().entry(i, k))}));
    j["pairing"] = json{{"table", std::move(table)}};
    return j;
}

MultiplierPtr multiplier_from_json(const json& j, const TorusPtr& torus, const PeriodsPtr& periods) {
    const Backend& b = torus->backend();
    IntMat h_l = intmat_from_json(field(j, "h_l", "multiplier"), "h_l");
    IntMat h_r = intmat_from_json(field(j, "h_r", "multiplier"), "h_r");
    std::vector<Scalar> psi;
    for (const json& s : field(j, "psi", "multiplier")) psi.push_back(scalar_from_json(s, b, "psi"));
    int m = periods->rank();
    SymmetricPairing pairing = SymmetricPairing::trivial(b, m);
    if (j.contains("pairing")) {
        std::vector<Scalar> table(static_cast<size_t>(m) * (m + 1) / 2, Scalar::one(b));
        for (const json& e : field(j["pairing"], "table", "pairing")) {
            if (!e.is_array() || e.size() != 3) fail("pairing table entries must be [i, j, scalar]");
            int i = e[0].get<int>(), k = e[1].get<int>();
            if (!(0 <= i && i <= k && k < m)) fail("pairing table index out of range");
            size_t pos = static_cast<size_t>(i) * (2 * m - i - 1) / 2 + k;
            table[pos] = scalar_from_json(e[2], b, "pairing.table");
        }
        pairing = SymmetricPairing(b, m, std::move(table));
    }
    return std::make_shared<const ThetaMultiplier>(torus, periods, std::move(h_l), std::move(h_r),
                                                   std::move(psi), std::move(pairing));
}

json morphism_to_json(const TorusMorphism& F) {
    json j;
    j["matrix"] = intmat_to_json(F.matrix());
    json a = json::array();
    for (const Scalar& s : F.a_basis()) a.push_back(scalar_to_json(s));
    j["a_basis"] = std::move(a);
    return j;
}

TorusMorphism morphism_from_json(const json& j, const TorusPtr& source, const TorusPtr& target) {
    IntMat f = intmat_from_json(field(j, "matrix", "morphism"), "morphism.matrix");
    std::vector<Scalar> a;
    if (j.contains("a_basis")) {
        for (const json& s : j["a_basis"]) a.push_back(scalar_from_json(s, target->backend(), "a_basis"));
    } else {
        a.assign(static_cast<size_t>(target->rank()), Scalar::one(target->backend()));
    }
    return TorusMorphism::make(source, target, std::move(f), std::move(a));
}

json series_to_json(const ThetaSeries& s) {
    const ThetaMultiplier& L = *s.multiplier();
    json j;
    j["backend"] = backend_to_json(L.torus()->backend());
    j["torus"] = torus_to_json(*L.torus());
    j["periods"] = periods_to_json(*L.periods());
    j["multiplier"] = multiplier_to_json(L);
    j["radius"] = s.radius();
    json coeffs = json::array();
    for (const auto& [h, c] : s.coeffs()) {
        json hv = json::array();
        for (long long x : h) hv.push_back(x);
        coeffs.push_back(json::array({std::move(hv), coeff_to_json(c)}));
    }
    j["coeffs"] = std::move(coeffs);
    json seeds = json::array();
    for (const Coefficient& c : s.seeds()) seeds.push_back(coeff_to_json(c));
    j["seeds"] = std::move(seeds);
    return j;
}

ThetaSeries series_from_json(const json& j) {
    Backend b = backend_from_json(field(j, "backend", "series"));
    TorusPtr torus = torus_from_json(field(j, "torus", "series"), b);
    PeriodsPtr periods = periods_from_json(field(j, "periods", "series"), torus);
    MultiplierPtr L = multiplier_from_json(field(j, "multiplier", "series"), torus, periods);
    long long radius = field(j, "radius", "series").get<long long>();
    std::map<IntVec, Coefficient> coeffs;
    for (const json& e : field(j, "coeffs", "series")) {
        if (!e.is_array() || e.size() != 2) fail("series coeff entries must be [h, coefficient]");
        IntVec h;
        for (const json& x : e[0]) h.push_back(x.get<long long>());
        Coefficient c = coeff_from_json(e[1], b, "series coefficient");
        if (!c.is_zero()) coeffs.emplace(std::move(h), std::move(c));
    }
    std::vector<Coefficient> seeds;
    if (j.contains("seeds"))
        for (const json& e : j["seeds"]) seeds.push_back(coeff_from_json(e, b, "series seed"));
    return ThetaSeries(L, radius, std::move(coeffs), std::move(seeds));
}

json framed_to_json(const FramedTorus& f) {
    const AbstractTorus& a = f.base();
    json j;
    j["rank"] = a.char_rank();
    auto table = [&](const std::vector<Scalar>& t) {
        json rows = json::array();
        for (int i = 0; i < a.char_rank(); ++i) {
            json row = json::array();
            for (int k = 0; k < a.period_rank(); ++k)
                row.push_back(scalar_to_json(t[static_cast<size_t>(i) * a.period_rank() + k]));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["periods"] = table(a.table());
    j["framing"] = table(f.framing_table());
    return j;
}

FramedTorus framed_from_json(const json& j, const Backend& b) {
    int n = field(j, "rank", "framed torus").get<int>();
    auto parse_table = [&](const json& rows, const char* where, int& m_out) {
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            fail(std::string(where) + " must have one row per character");
        std::vector<Scalar> t;
        int m = -1;
        for (const json& row : rows) {
            if (m < 0) m = static_cast<int>(row.size());
            if (static_cast<int>(row.size()) != m) fail(std::string(where) + " rows are ragged");
            for (const json& v : row) t.push_back(scalar_from_json(v, b, where));
        }
        m_out = std::max(m, 0);
        return t;
    };
    int m1 = 0, m2 = 0;
    std::vector<Scalar> periods = parse_table(field(j, "periods", "framed torus"), "periods", m1);
    std::vector<Scalar> framing = parse_table(field(j, "framing", "framed torus"), "framing", m2);
    if (m1 != m2) fail("periods and framing must have the same period rank");
    return FramedTorus(AbstractTorus(b, n, m1, std::move(periods)), std::move(framing));
}

json eigen_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(double_to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json eigen_cx_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array(
                {double_to_string(m(i, j).real()), double_to_string(m(i, j).imag())}));
        rows.push_back(std::move(row));
    }
    return rows;
}

json intmat_list_to_json(const std::vector<IntMat>& ms) {
    json out = json::array();
    for (const IntMat& m : ms) out.push_back(intmat_to_json(m));
    return out;
}

}  // namespace qtheta::io
