#include "qtheta/nctorus.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtheta {

TorusPtr direct_product(const TorusPtr& t1, const TorusPtr& t2) {
    return make_torus(t1->alpha().direct_sum(t2->alpha()));
}

// ------------------------------------------------------- GroupRingElement

GroupRingElement GroupRingElement::monomial(TorusPtr torus, IntVec h, Coefficient c) {
    if (static_cast<int>(h.size()) != torus->rank()) throw std::invalid_argument("rank mismatch");
    GroupRingElement x(std::move(torus));
    if (!c.is_zero()) x.coeffs_.emplace(std::move(h), std::move(c));
    return x;
}

GroupRingElement GroupRingElement::unit(TorusPtr torus) {
    IntVec zero(torus->rank(), 0);
    Coefficient one = Coefficient::one(torus->backend());
    return monomial(std::move(torus), std::move(zero), std::move(one));
}

Coefficient GroupRingElement::coeff(std::span<const long long> h) const {
    auto it = coeffs_.find(IntVec(h.begin(), h.end()));
    if (it == coeffs_.end()) return Coefficient::zero(torus_->backend());
    return it->second;
}

void GroupRingElement::add_term(const IntVec& h, const Coefficient& c) {
    if (c.is_zero()) return;
    auto it = coeffs_.find(h);
    if (it == coeffs_.end()) {
        coeffs_.emplace(h, c);
        return;
    }
    Coefficient s = it->second.add(c);
    if (s.is_zero())
        coeffs_.erase(it);
    else
        it->second = std::move(s);
}

GroupRingElement GroupRingElement::add(const GroupRingElement& o) const {
    if (!torus_->same_as(*o.torus_)) throw std::invalid_argument("torus mismatch");
    GroupRingElement r = *this;
    for (const auto& [h, c] : o.coeffs_) r.add_term(h, c);
    return r;
}

GroupRingElement GroupRingElement::scaled(const Coefficient& c) const {
    GroupRingElement r(torus_);
    if (c.is_zero()) return r;
    for (const auto& [h, v] : coeffs_) r.coeffs_.emplace(h, v.mul(c));
    return r;
}

bool GroupRingElement::eq(const GroupRingElement& o, double tol) const {
    return dist(o) <= tol;
}

double GroupRingElement::dist(const GroupRingElement& o) const {
    double worst = 0.0;
    const Backend& b = torus_->backend();
    auto upd = [&](const Coefficient& x, const Coefficient& y) {
        worst = std::max(worst, Coefficient::dist(x, y).to_double());
    };
    for (const auto& [h, c] : coeffs_) upd(c, o.coeff(h));
    for (const auto& [h, c] : o.coeffs_) {
        if (coeffs_.find(h) == coeffs_.end()) upd(Coefficient::zero(b), c);
    }
    return worst;
}

GroupRingElement ring_mul(const GroupRingElement& x, const GroupRingElement& y) {
    if (!x.torus()->same_as(*y.torus())) throw std::invalid_argument("torus mismatch");
    const NCTorus& T = *x.torus();
    GroupRingElement r(x.torus());
    IntVec sum(T.rank());
    for (const auto& [h, ch] : x.coeffs())
        for (const auto& [g, cg] : y.coeffs()) {
            for (int i = 0; i < T.rank(); ++i) sum[i] = h[i] + g[i];
            Scalar twist = T.alpha().eval(h, g);
            r.add_term(sum, ch.mul(cg).mul(twist));
        }
    return r;
}

GroupRingElement ring_inv(const GroupRingElement& x) {
    if (x.support_size() != 1)
        throw std::domain_error("only monomials a e(h) are invertible in Al(H,alpha)");
    const auto& [h, c] = *x.coeffs().begin();
    Scalar a = *c.to_scalar();
    const NCTorus& T = *x.torus();
    IntVec neg(h.size());
    for (size_t i = 0; i < h.size(); ++i) neg[i] = -h[i];
    Scalar inv_coeff = a.inv().mul(T.alpha().eps(h));
    return GroupRingElement::monomial(x.torus(), std::move(neg), inv_coeff.to_coefficient());
}

// --------------------------------------------------------- TorusMorphism

MorphismReport morphism_check(const NCTorus& source, const NCTorus& target, const IntMat& f,
                              double tol) {
    if (f.rows() != source.rank() || f.cols() != target.rank())
        throw std::invalid_argument("morphism matrix has wrong shape");
    int n1 = target.rank();
    MorphismReport rep;
    rep.compatible = true;
    rep.sigma.assign(static_cast<size_t>(n1) * (n1 + 1) / 2, 1);
    rep.sigma_is_one = true;
    size_t pos = 0;
    for (int i = 0; i < n1; ++i) {
        IntVec ei(n1, 0);
        ei[i] = 1;
        IntVec fi = f.apply(ei);
        for (int j = i; j < n1; ++j, ++pos) {
            IntVec ej(n1, 0);
            ej[j] = 1;
            IntVec fj = f.apply(ej);
            Scalar a1 = target.alpha().eval(ei, ej);
            Scalar a2 = source.alpha().eval(fi, fj);
            Scalar sigma = a1.mul(a2.inv());
            int sign = 0;
            if (!sigma.is_pm_one(tol, sign)) {
                rep.compatible = false;
                // residual of (2.2): distance of sigma^2 from 1
                Scalar sq = sigma.pow(2);
                double resid = Coefficient::dist(sq.to_coefficient(),
                                                 Coefficient::one(sq.backend()))
                                   .to_double();
                rep.max_residual = std::max(rep.max_residual, resid);
                continue;
            }
            rep.sigma[pos] = sign;
            if (sign != 1) rep.sigma_is_one = false;
        }
    }
    return rep;
}

TorusMorphism TorusMorphism::make(TorusPtr source, TorusPtr target, IntMat f,
                                  std::vector<Scalar> a_basis, double tol) {
    MorphismReport rep = morphism_check(*source, *target, f, tol);
    if (!rep.compatible)
        throw std::domain_error("lattice map is not compatible with the quantization parameters");
    if (a_basis.size() != static_cast<size_t>(target->rank()))
        throw std::invalid_argument("need one coefficient per basis vector of the target character group");
    TorusMorphism m;
    m.source_ = std::move(source);
    m.target_ = std::move(target);
    m.f_ = std::move(f);
    m.a_basis_ = std::move(a_basis);
    m.report_ = std::move(rep);
    return m;
}

int TorusMorphism::sigma(std::span<const long long> h, std::span<const long long> g) const {
    int n1 = target_->rank();
    long long exp = 0;
    size_t pos = 0;
    for (int i = 0; i < n1; ++i)
        for (int j = i; j < n1; ++j, ++pos) {
            if (report_.sigma[pos] == -1) {
                exp += (i == j) ? h[i] * g[i] : h[i] * g[j] + h[j] * g[i];
            }
        }
    return (exp % 2 == 0) ? 1 : -1;
}

Scalar TorusMorphism::coeff(std::span<const long long> h) const {
    const Backend& b = target_->backend();
    if (report_.sigma_is_one) {
        Scalar r = Scalar::one(b);
        for (size_t i = 0; i < a_basis_.size(); ++i)
            if (h[i] != 0) r = r.mul(a_basis_[i].pow(h[i]));
        return r;
    }
    // generic reconstruction: step through the basis in ascending order
    int n1 = target_->rank();
    IntVec cur(n1, 0);
    Scalar acc = Scalar::one(b);
    for (int i = 0; i < n1; ++i) {
        IntVec ei(n1, 0);
        ei[i] = 1;
        long long steps = h[i];
        while (steps > 0) {
            if (sigma(cur, ei) < 0) acc = acc.negated();  // sigma^-1 = sigma
            acc = acc.mul(a_basis_[i]);
            ++cur[i];
            --steps;
        }
        while (steps < 0) {
            --cur[i];
            acc = acc.mul(a_basis_[i].inv());
            if (sigma(cur, ei) < 0) acc = acc.negated();
            ++steps;
        }
    }
    return acc;
}

GroupRingElement TorusMorphism::apply_star(const GroupRingElement& x) const {
    if (!x.torus()->same_as(*target_)) throw std::invalid_argument("torus mismatch: F* consumes Al of the target");
    GroupRingElement r(source_);
    for (const auto& [h, c] : x.coeffs()) {
        IntVec fh = f_.apply(h);
        r.add_term(fh, c.mul(coeff(h)));
    }
    return r;
}

CharacterPoint TorusMorphism::push_point(const CharacterPoint& x) const {
    if (x.rank() != source_->rank()) throw std::invalid_argument("rank mismatch");
    std::vector<Scalar> vals;
    vals.reserve(static_cast<size_t>(target_->rank()));
    for (int i = 0; i < target_->rank(); ++i) vals.push_back(x.eval(f_.column(i)));
    return CharacterPoint(x.backend(), std::move(vals));
}

// ---------------------------------------------------- standard morphisms

TorusMorphism make_shift(const TorusPtr& torus, const CharacterPoint& b) {
    if (b.rank() != torus->rank()) throw std::invalid_argument("rank mismatch");
    std::vector<Scalar> a;
    a.reserve(static_cast<size_t>(b.rank()));
    for (int i = 0; i < b.rank(); ++i) a.push_back(b.value(i));
    return TorusMorphism::make(torus, torus, IntMat::identity(torus->rank()), std::move(a));
}

TorusMorphism make_mult_n(const TorusPtr& torus, long n) {
    TorusPtr target = make_torus(torus->alpha().pow(n * n));
    IntMat f = IntMat::identity(torus->rank()).scaled(n);
    std::vector<Scalar> a(static_cast<size_t>(torus->rank()), Scalar::one(torus->backend()));
    return TorusMorphism::make(torus, target, std::move(f), std::move(a));
}

TorusMorphism make_external_mult(const AlternatingPairing& alpha, const AlternatingPairing& beta) {
    if (alpha.rank() != beta.rank()) throw std::invalid_argument("rank mismatch");
    int n = alpha.rank();
    TorusPtr source = make_torus(alpha.direct_sum(beta));
    // alpha*beta as a pairing: entrywise product of basis data
    std::vector<Scalar> off;
    std::vector<int> diag(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) off.push_back(alpha.offdiag(i, j).mul(beta.offdiag(i, j)));
        diag[i] = alpha.diag(i) * beta.diag(i);
    }
    TorusPtr prod_target = make_torus(AlternatingPairing(alpha.backend(), n, std::move(off), std::move(diag)));
    IntMat f(2 * n, n);
    for (int i = 0; i < n; ++i) {
        f.at(i, i) = 1;
        f.at(n + i, i) = 1;
    }
    std::vector<Scalar> a(static_cast<size_t>(n), Scalar::one(alpha.backend()));
    return TorusMorphism::make(source, prod_target, std::move(f), std::move(a));
}

TorusMorphism make_mumford(const AlternatingPairing& alpha) {
    int n = alpha.rank();
    TorusPtr source = make_torus(alpha.direct_sum(alpha));
    AlternatingPairing alpha2 = alpha.pow(2);
    TorusPtr target = make_torus(alpha2.direct_sum(alpha2));
    IntMat f(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        f.at(i, i) = 1;
        f.at(i, n + i) = 1;
        f.at(n + i, i) = 1;
        f.at(n + i, n + i) = -1;
    }
    std::vector<Scalar> a(static_cast<size_t>(2 * n), Scalar::one(alpha.backend()));
    return TorusMorphism::make(source, target, std::move(f), std::move(a));
}

GroupRingElement tensor(const TorusPtr& product, const GroupRingElement& x, const GroupRingElement& y) {
    int n1 = x.torus()->rank(), n2 = y.torus()->rank();
    if (product->rank() != n1 + n2) throw std::invalid_argument("rank mismatch");
    GroupRingElement r(product);
    for (const auto& [h1, c1] : x.coeffs())
        for (const auto& [h2, c2] : y.coeffs()) {
            IntVec h(h1);
            h.insert(h.end(), h2.begin(), h2.end());
            r.add_term(h, c1.mul(c2));
        }
    return r;
}

// -------------------------------------------------------- FiniteGroupoid

FiniteGroupoid FiniteGroupoid::make(int n_objects, std::vector<int> src, std::vector<int> tgt,
                                    std::vector<int> identity, std::vector<std::vector<int>> compose) {
    FiniteGroupoid G;
    G.n_objects_ = n_objects;
    G.src_ = std::move(src);
    G.tgt_ = std::move(tgt);
    G.identity_ = std::move(identity);
    G.compose_ = std::move(compose);
    int nm = G.morphisms();
    if (static_cast<int>(G.tgt_.size()) != nm || static_cast<int>(G.compose_.size()) != nm)
        throw std::invalid_argument("inconsistent groupoid tables");
    // identities neutral
    for (int u = 0; u < n_objects; ++u) {
        int e = G.identity_[u];
        if (G.src_[e] != u || G.tgt_[e] != u) throw std::invalid_argument("bad identity morphism");
    }
    for (int i = 0; i < nm; ++i) {
        if (G.compose(G.identity_[G.tgt_[i]], i) != i || G.compose(i, G.identity_[G.src_[i]]) != i)
            throw std::invalid_argument("identity law fails");
    }
    // composition defined exactly on matching ends, with matching endpoints
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nm; ++j) {
            int k = G.compose(i, j);
            bool composable = (G.src_[i] == G.tgt_[j]);
            if (composable != (k >= 0)) throw std::invalid_argument("composition domain mismatch");
            if (k >= 0 && (G.src_[k] != G.src_[j] || G.tgt_[k] != G.tgt_[i]))
                throw std::invalid_argument("composition endpoints mismatch");
        }
    // associativity
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nm; ++j) {
            if (G.compose(i, j) < 0) continue;
            for (int k = 0; k < nm; ++k) {
                if (G.compose(j, k) < 0) continue;
                if (G.compose(G.compose(i, j), k) != G.compose(i, G.compose(j, k)))
                    throw std::invalid_argument("composition is not associative");
            }
        }
    // every morphism invertible
    for (int i = 0; i < nm; ++i) {
        bool has_inverse = false;
        for (int j = 0; j < nm && !has_inverse; ++j)
            has_inverse = G.compose(i, j) == G.identity_[G.tgt_[i]] &&
                          G.compose(j, i) == G.identity_[G.src_[i]];
        if (!has_inverse) throw std::invalid_argument("non-invertible morphism in groupoid");
    }
    return G;
}

FiniteGroupoid FiniteGroupoid::from_group_table(const std::vector<std::vector<int>>& mult, int id) {
    int n = static_cast<int>(mult.size());
    std::vector<int> src(n, 0), tgt(n, 0);
    return make(1, std::move(src), std::move(tgt), {id}, mult);
}

FiniteGroupoid FiniteGroupoid::pair_groupoid(int n_objects) {
    int n = n_objects;
    int nm = n * n;  // morphism (a,b): b -> a, index a*n+b
    std::vector<int> src(nm), tgt(nm), identity(n);
    std::vector<std::vector<int>> comp(nm, std::vector<int>(nm, -1));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            src[a * n + b] = b;
            tgt[a * n + b] = a;
        }
    for (int u = 0; u < n; ++u) identity[u] = u * n + u;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                comp[a * n + b][b * n + c] = a * n + c;  // (a<-b) after (b<-c)
    return make(n, std::move(src), std::move(tgt), std::move(identity), std::move(comp));
}

std::vector<Coefficient> groupoid_convolve(const FiniteGroupoid& G,
                                           std::span<const Coefficient> f,
                                           std::span<const Coefficient> g) {
    int nm = G.morphisms();
    if (static_cast<int>(f.size()) != nm || static_cast<int>(g.size()) != nm)
        throw std::invalid_argument("function support must list every morphism");
    const Backend& b = f.empty() ? Backend{} : f[0].backend();
    std::vector<Coefficient> out(static_cast<size_t>(nm), Coefficient::zero(b));
    for (int j = 0; j < nm; ++j)
        for (int i = 0; i < nm; ++i) {
            int k = G.compose(i, j);
            if (k < 0) continue;
            out[k] = out[k].add(f[j].mul(g[i]));
        }
    return out;
}

}  // namespace qtheta
