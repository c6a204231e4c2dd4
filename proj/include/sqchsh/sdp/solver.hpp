// Copyright 2026 The sqchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Infeasible-start primal-dual interior-point method for SdpProblem.
//
// Complex blocks are replaced by their real embeddings, each coefficient A
// becoming emb(A)/2 so that <emb(A)/2, emb(X)> = Tr[A X]. The real problem
//
//   max <C, X> + cf.u   s.t.  A(X) + F u = b,  X PSD
//   min b.y             s.t.  A*(y) - C = Z PSD,  F^T y = cf
//
// is solved with the HKM search direction and a Mehrotra predictor-corrector.
// Free variables are eliminated through the Schur complement F^T M^-1 F.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sqchsh/sdp/embedding.hpp"
#include "sqchsh/sdp/problem.hpp"

namespace sqchsh::sdp {

struct SolverOptions {
    double gap_tol = 1e-7;
    double feas_tol = 1e-8;
    int max_iter = 200;
    /// Fraction-to-boundary factor for step lengths.
    double step_fraction = 0.98;
    /// Relative pivot below which a constraint row counts as dependent.
    double presolve_tol = 1e-10;
    bool verbose = false;
};

namespace detail {

struct Entry {
    int r;
    int c;
    double v;
};

struct BlockTerm {
    int block;
    std::vector<Entry> entries;
};

/// Real-embedded problem in maximize form.
struct RealProblem {
    std::vector<int> dims;
    std::vector<std::vector<Entry>> c;
    std::vector<std::vector<BlockTerm>> a;
    Eigen::VectorXd b;
    Eigen::MatrixXd f;
    Eigen::VectorXd cf;

    int rows() const {
        return static_cast<int>(a.size());
    }
    int free_count() const {
        return static_cast<int>(f.cols());
    }
};

inline std::vector<Entry> sparse_entries(const RealMatrix &m) {
    std::vector<Entry> out;
    for (int c = 0; c < m.cols(); c++) {
        for (int r = 0; r < m.rows(); r++) {
            if (m(r, c) != 0) {
                out.push_back({r, c, m(r, c)});
            }
        }
    }
    return out;
}

inline RealProblem embed(const SdpProblem &p) {
    const double sign = p.sense == Sense::Maximize ? 1.0 : -1.0;
    RealProblem out;
    const auto nb = p.blocks.size();
    for (const auto &b : p.blocks) {
        out.dims.push_back(2 * b.dim());
    }
    std::vector<RealMatrix> cobj(nb);
    for (std::size_t k = 0; k < nb; k++) {
        cobj[k] = RealMatrix::Zero(out.dims[k], out.dims[k]);
    }
    for (const auto &t : p.objective) {
        cobj[static_cast<std::size_t>(t.block)] += sign * real_embedding(t.coeff) / 2;
    }
    out.c.resize(nb);
    for (std::size_t k = 0; k < nb; k++) {
        out.c[k] = sparse_entries(cobj[k]);
    }
    const auto m = static_cast<Eigen::Index>(p.constraints.size());
    const auto nf = static_cast<Eigen::Index>(p.free_vars.size());
    out.b.resize(m);
    out.f = Eigen::MatrixXd::Zero(m, nf);
    out.cf = Eigen::VectorXd::Zero(nf);
    for (const auto &f : p.free_objective) {
        out.cf(f.var) += sign * f.coeff;
    }
    out.a.resize(p.constraints.size());
    for (Eigen::Index i = 0; i < m; i++) {
        const auto &con = p.constraints[static_cast<std::size_t>(i)];
        out.b(i) = con.rhs;
        std::vector<int> order;
        for (const auto &t : con.terms) {
            if (std::find(order.begin(), order.end(), t.block) == order.end()) {
                order.push_back(t.block);
            }
        }
        std::sort(order.begin(), order.end());
        for (int blk : order) {
            RealMatrix acc = RealMatrix::Zero(out.dims[static_cast<std::size_t>(blk)], out.dims[static_cast<std::size_t>(blk)]);
            for (const auto &t : con.terms) {
                if (t.block == blk) {
                    acc += real_embedding(t.coeff) / 2;
                }
            }
            auto entries = sparse_entries(acc);
            if (!entries.empty()) {
                out.a[static_cast<std::size_t>(i)].push_back({blk, std::move(entries)});
            }
        }
        for (const auto &f : con.free_terms) {
            out.f(i, f.var) += f.coeff;
        }
    }
    return out;
}

/// Keeps only the listed rows.
inline RealProblem select_rows(const RealProblem &p, const std::vector<int> &rows) {
    RealProblem out;
    out.dims = p.dims;
    out.c = p.c;
    out.cf = p.cf;
    out.b.resize(static_cast<Eigen::Index>(rows.size()));
    out.f.resize(static_cast<Eigen::Index>(rows.size()), p.f.cols());
    for (std::size_t k = 0; k < rows.size(); k++) {
        out.a.push_back(p.a[static_cast<std::size_t>(rows[k])]);
        out.b(static_cast<Eigen::Index>(k)) = p.b(rows[k]);
        out.f.row(static_cast<Eigen::Index>(k)) = p.f.row(rows[k]);
    }
    return out;
}

using Blocks = std::vector<RealMatrix>;

inline double dot(const std::vector<Entry> &e, const RealMatrix &x) {
    double s = 0;
    for (const auto &t : e) {
        s += t.v * x(t.r, t.c);
    }
    return s;
}

inline Eigen::VectorXd apply_a(const RealProblem &p, const Blocks &x) {
    Eigen::VectorXd out(p.rows());
    for (int i = 0; i < p.rows(); i++) {
        double s = 0;
        for (const auto &t : p.a[static_cast<std::size_t>(i)]) {
            s += dot(t.entries, x[static_cast<std::size_t>(t.block)]);
        }
        out(i) = s;
    }
    return out;
}

inline Blocks apply_at(const RealProblem &p, const Eigen::VectorXd &y) {
    Blocks out;
    for (int n : p.dims) {
        out.push_back(RealMatrix::Zero(n, n));
    }
    for (int i = 0; i < p.rows(); i++) {
        if (y(i) == 0) {
            continue;
        }
        for (const auto &t : p.a[static_cast<std::size_t>(i)]) {
            auto &o = out[static_cast<std::size_t>(t.block)];
            for (const auto &e : t.entries) {
                o(e.r, e.c) += y(i) * e.v;
            }
        }
    }
    return out;
}

inline RealMatrix dense(const std::vector<Entry> &e, int n) {
    RealMatrix out = RealMatrix::Zero(n, n);
    for (const auto &t : e) {
        out(t.r, t.c) += t.v;
    }
    return out;
}

inline double inner(const Blocks &a, const Blocks &b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); k++) {
        s += (a[k].array() * b[k].array()).sum();
    }
    return s;
}

inline RealMatrix sym(const RealMatrix &m) {
    return (m + m.transpose()) / 2;
}

/// Rows touching each block, as (row, term index) pairs.
inline std::vector<std::vector<std::pair<int, int>>> block_rows(const RealProblem &p) {
    std::vector<std::vector<std::pair<int, int>>> out(p.dims.size());
    for (int i = 0; i < p.rows(); i++) {
        const auto &terms = p.a[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < terms.size(); t++) {
            out[static_cast<std::size_t>(terms[t].block)].push_back({i, static_cast<int>(t)});
        }
    }
    return out;
}

/// Accumulates sum_b <A_ib, L A_kb R> into out(i, k) for k at or after i in
/// each block's row list. Only the upper triangle is filled.
inline void accumulate_pairs(const RealProblem &p, const std::vector<std::vector<std::pair<int, int>>> &rows,
                             const Blocks &left, const Blocks &right, Eigen::MatrixXd &out) {
    for (std::size_t b = 0; b < p.dims.size(); b++) {
        const int n = p.dims[b];
        const auto &list = rows[b];
        RealMatrix v(n, n);
        for (std::size_t ii = 0; ii < list.size(); ii++) {
            const auto [i, ti] = list[ii];
            const auto &ei = p.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(ti)].entries;
            // v = R A_i L, so <A_k, L A_i R>... evaluated as sum A_k(r,s) v(s,r).
            if (ei.size() > static_cast<std::size_t>(2 * n)) {
                v.noalias() = right[b] * dense(ei, n) * left[b];
            } else {
                v.setZero();
                for (const auto &e : ei) {
                    v.noalias() += e.v * right[b].col(e.r) * left[b].row(e.c);
                }
            }
            for (std::size_t kk = ii; kk < list.size(); kk++) {
                const auto [k, tk] = list[kk];
                const auto &ek = p.a[static_cast<std::size_t>(k)][static_cast<std::size_t>(tk)].entries;
                double s = 0;
                for (const auto &e : ek) {
                    s += e.v * v(e.c, e.r);
                }
                const int lo = std::min(i, k);
                const int hi = std::max(i, k);
                out(lo, hi) += s;
            }
        }
    }
}

struct PresolveResult {
    std::vector<int> kept;
    bool infeasible = false;
    std::vector<double> certificate;
    std::string message;
};

/// Greedy rank detection on the Gram matrix of the constraint rows.
/// Dependent rows with consistent right-hand sides are dropped; an
/// inconsistent one proves the equality system infeasible.
inline PresolveResult presolve(const RealProblem &p, double tol) {
    const int m = p.rows();
    Blocks id;
    for (int n : p.dims) {
        id.push_back(RealMatrix::Identity(n, n));
    }
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    accumulate_pairs(p, block_rows(p), id, id, g);
    g.triangularView<Eigen::StrictlyLower>() = g.transpose();
    g += p.f * p.f.transpose();

    PresolveResult out;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
    int r = 0;
    for (int i = 0; i < m; i++) {
        const double gii = g(i, i);
        if (gii <= 0) {
            if (std::abs(p.b(i)) > 1e-12) {
                out.infeasible = true;
                out.certificate.assign(static_cast<std::size_t>(m), 0.0);
                out.certificate[static_cast<std::size_t>(i)] = 1;
                out.message = "constraint " + std::to_string(i) + " has no coefficients but a nonzero right-hand side";
                return out;
            }
            continue;
        }
        Eigen::VectorXd gi(r);
        for (int k = 0; k < r; k++) {
            gi(k) = g(out.kept[static_cast<std::size_t>(k)], i);
        }
        Eigen::VectorXd w = r > 0 ? Eigen::VectorXd(l.topLeftCorner(r, r).triangularView<Eigen::Lower>().solve(gi))
                                  : Eigen::VectorXd();
        const double d = gii - w.squaredNorm();
        if (d > tol * gii) {
            l.block(r, 0, 1, r) = w.transpose();
            l(r, r) = std::sqrt(d);
            out.kept.push_back(i);
            r++;
            continue;
        }
        const Eigen::VectorXd coef = l.topLeftCorner(r, r).transpose().triangularView<Eigen::Upper>().solve(w);
        double predicted = 0;
        for (int k = 0; k < r; k++) {
            predicted += coef(k) * p.b(out.kept[static_cast<std::size_t>(k)]);
        }
        const double scale = 1 + std::abs(p.b(i)) + coef.cwiseAbs().sum();
        if (std::abs(predicted - p.b(i)) > 1e-9 * scale) {
            out.infeasible = true;
            out.certificate.assign(static_cast<std::size_t>(m), 0.0);
            out.certificate[static_cast<std::size_t>(i)] = 1;
            for (int k = 0; k < r; k++) {
                out.certificate[static_cast<std::size_t>(out.kept[static_cast<std::size_t>(k)])] = -coef(k);
            }
            out.message = "constraint " + std::to_string(i) + " contradicts earlier constraints (rhs " +
                          std::to_string(p.b(i)) + " vs implied " + std::to_string(predicted) + ")";
            return out;
        }
    }
    return out;
}

/// Largest alpha with x + alpha dx PSD (infinity if unbounded).
inline double max_step(const RealMatrix &x, const RealMatrix &dx) {
    Eigen::LLT<RealMatrix> llt(x);
    if (llt.info() != Eigen::Success) {
        return 0;
    }
    const RealMatrix li = llt.matrixL().solve(RealMatrix::Identity(x.rows(), x.cols()));
    const RealMatrix s = sym(li * dx * li.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<RealMatrix>(s, Eigen::EigenvaluesOnly).eigenvalues()(0);
    return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1 / lmin;
}

inline double min_eig(const RealMatrix &x) {
    return Eigen::SelfAdjointEigenSolver<RealMatrix>(sym(x), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

struct RealResult {
    Status status = Status::MaxIterations;
    Blocks x;
    Blocks z;
    Eigen::VectorXd y;
    Eigen::VectorXd u;
    double pobj = 0;
    double dobj = 0;
    double rp = 0;
    double rd = 0;
    int iterations = 0;
    std::string message;
    std::vector<double> certificate;
};

inline RealResult solve_real(const RealProblem &p, const SolverOptions &opts) {
    const int m = p.rows();
    const int nf = p.free_count();
    const auto nb = p.dims.size();
    int ntot = 0;
    for (int n : p.dims) {
        ntot += n;
    }
    const auto rows = block_rows(p);

    // Scale of the starting point from the data norms.
    double bmax = p.b.size() ? p.b.cwiseAbs().maxCoeff() : 0;
    double cnorm = 0;
    for (const auto &c : p.c) {
        for (const auto &e : c) {
            cnorm = std::max(cnorm, std::abs(e.v));
        }
    }
    RealResult res;
    for (std::size_t k = 0; k < nb; k++) {
        const int n = p.dims[k];
        res.x.push_back(std::max(1.0, bmax) * RealMatrix::Identity(n, n));
        res.z.push_back(std::max(1.0, cnorm) * RealMatrix::Identity(n, n));
    }
    res.y = Eigen::VectorXd::Zero(m);
    res.u = Eigen::VectorXd::Zero(nf);
    // Best iterate so far, returned when the tolerances are never met.
    RealResult best = res;
    double best_merit = std::numeric_limits<double>::infinity();
    int last_progress = 0;

    for (int it = 0; it <= opts.max_iter; it++) {
        auto &x = res.x;
        auto &z = res.z;
        const Eigen::VectorXd rp = p.b - apply_a(p, x) - p.f * res.u;
        Blocks rd = apply_at(p, res.y);
        Blocks cdense;
        for (std::size_t k = 0; k < nb; k++) {
            cdense.push_back(dense(p.c[k], p.dims[k]));
            rd[k] -= z[k] + cdense[k];
        }
        const Eigen::VectorXd rf = p.cf - p.f.transpose() * res.y;
        res.pobj = inner(cdense, x) + p.cf.dot(res.u);
        res.dobj = p.b.dot(res.y);
        const double xz = inner(x, z);
        const double mu = xz / ntot;
        double rd_inf = rf.size() ? rf.cwiseAbs().maxCoeff() : 0;
        for (const auto &r : rd) {
            rd_inf = std::max(rd_inf, r.cwiseAbs().maxCoeff());
        }
        res.rp = rp.size() ? rp.cwiseAbs().maxCoeff() : 0;
        res.rd = rd_inf;
        res.iterations = it;
        if (opts.verbose) {
            std::fprintf(stderr, "%3d  pobj % .10e  dobj % .10e  xz %.2e  rp %.2e  rd %.2e\n", it, res.pobj, res.dobj,
                         xz, res.rp, res.rd);
        }
        if (res.rp <= opts.feas_tol && res.rd <= opts.feas_tol && std::abs(res.dobj - res.pobj) <= opts.gap_tol &&
            xz <= opts.gap_tol) {
            res.status = Status::Optimal;
            return res;
        }
        const double merit = std::max({res.rp / opts.feas_tol, res.rd / opts.feas_tol,
                                       std::abs(res.dobj - res.pobj) / opts.gap_tol, xz / opts.gap_tol});
        if (merit < best_merit) {
            if (merit < 0.5 * best_merit) {
                last_progress = it;
            }
            best_merit = merit;
            best = res;
        } else if (it - last_progress > 15) {
            res.message = "stalled at iteration " + std::to_string(it);
            break;
        }
        // Divergence checks: a growing dual iterate with b.y -> -inf points at
        // primal infeasibility, a growing primal one at dual infeasibility.
        const double ynorm = res.y.size() ? res.y.cwiseAbs().maxCoeff() : 0;
        if (ynorm > 1e8 && res.dobj < 0) {
            const Eigen::VectorXd yh = res.y / -res.dobj;
            const auto aty = apply_at(p, yh);
            double worst = 0;
            for (const auto &blk : aty) {
                worst = std::min(worst, min_eig(blk));
            }
            const double fres = nf ? (p.f.transpose() * yh).cwiseAbs().maxCoeff() : 0;
            if (worst > -1e-6 && fres < 1e-6) {
                res.status = Status::Infeasible;
                res.message = "primal infeasible: found y with A*(y) PSD and b.y < 0";
                res.certificate.assign(yh.data(), yh.data() + yh.size());
                return res;
            }
        }
        double xnorm = 0;
        for (const auto &blk : x) {
            xnorm = std::max(xnorm, blk.cwiseAbs().maxCoeff());
        }
        if (xnorm > 1e8 && res.pobj > 0 && res.rp < 1e-6 * xnorm) {
            res.status = Status::Infeasible;
            res.message = "dual infeasible: primal objective unbounded";
            return res;
        }
        if (it == opts.max_iter) {
            break;
        }

        Blocks zinv;
        for (std::size_t k = 0; k < nb; k++) {
            Eigen::LLT<RealMatrix> llt(z[k]);
            zinv.push_back(sym(llt.solve(RealMatrix::Identity(p.dims[k], p.dims[k]))));
        }
        // Schur complement M_ik = <A_i, X A_k Z^-1>.
        Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
        accumulate_pairs(p, rows, x, zinv, schur);
        schur.triangularView<Eigen::StrictlyLower>() = schur.transpose();
        Eigen::LLT<Eigen::MatrixXd> chol(schur);
        if (chol.info() != Eigen::Success) {
            const double shift = 1e-13 * std::max(1.0, schur.diagonal().maxCoeff());
            schur.diagonal().array() += shift;
            chol.compute(schur);
            if (chol.info() != Eigen::Success) {
                res.message = "Schur complement lost positive definiteness at iteration " + std::to_string(it);
                break;
            }
        }
        Eigen::MatrixXd minv_f;
        Eigen::LLT<Eigen::MatrixXd> free_chol;
        if (nf > 0) {
            minv_f = chol.solve(p.f);
            free_chol.compute(p.f.transpose() * minv_f);
        }

        struct Direction {
            Blocks dx;
            Blocks dz;
            Eigen::VectorXd dy;
            Eigen::VectorXd du;
        };
        // Direction for target sigma*mu with second-order term `corr`.
        auto direction = [&](double target, const Blocks *corr_x, const Blocks *corr_z) {
            Blocks k(nb);
            for (std::size_t b = 0; b < nb; b++) {
                RealMatrix t = x[b] * rd[b];
                if (corr_x) {
                    t += (*corr_x)[b] * (*corr_z)[b];
                }
                k[b] = target * zinv[b] - x[b] - t * zinv[b];
            }
            Eigen::VectorXd h(m);
            for (int i = 0; i < m; i++) {
                double s = 0;
                for (const auto &t : p.a[static_cast<std::size_t>(i)]) {
                    s += dot(t.entries, k[static_cast<std::size_t>(t.block)]);
                }
                h(i) = s - rp(i);
            }
            Direction d;
            Eigen::VectorXd minv_h = chol.solve(h);
            if (nf > 0) {
                d.du = free_chol.solve(rf - minv_f.transpose() * h);
                d.dy = minv_h + minv_f * d.du;
            } else {
                d.du = Eigen::VectorXd::Zero(0);
                d.dy = minv_h;
            }
            // Z + dZ = A*(y + dy) - C is formed directly; writing
            // dX = target Z^-1 - X (Z + dZ) Z^-1 avoids cancelling X against
            // X dZ Z^-1 once Z^-1 is large.
            const auto next_z = apply_at(p, Eigen::VectorXd(res.y + d.dy));
            d.dz.resize(nb);
            d.dx.resize(nb);
            for (std::size_t b = 0; b < nb; b++) {
                const RealMatrix w = sym(next_z[b] - cdense[b]);
                d.dz[b] = w - z[b];
                RealMatrix t = x[b] * d.dz[b];
                if (corr_x) {
                    t += (*corr_x)[b] * (*corr_z)[b];
                }
                d.dx[b] = sym(target * zinv[b] - t * zinv[b]) - x[b];
            }
            // Iterative refinement of the linear equations; M loses accuracy
            // as X and Z become ill-conditioned near the optimum. A round is
            // kept only if it shrinks the residual.
            auto linear_error = [&](const Direction &dd) {
                const Eigen::VectorXd r = rp - apply_a(p, dd.dx) - p.f * dd.du;
                const Eigen::VectorXd s = rf - p.f.transpose() * dd.dy;
                return std::pair<Eigen::VectorXd, Eigen::VectorXd>{r, s};
            };
            auto size_of = [](const std::pair<Eigen::VectorXd, Eigen::VectorXd> &e) {
                return std::max(e.first.size() ? e.first.cwiseAbs().maxCoeff() : 0.0,
                                e.second.size() ? e.second.cwiseAbs().maxCoeff() : 0.0);
            };
            auto err = linear_error(d);
            for (int round = 0; round < 2 && size_of(err) > 1e-15; round++) {
                Direction trial = d;
                const Eigen::VectorXd hh = -err.first;
                Eigen::VectorXd ddy = chol.solve(hh);
                if (nf > 0) {
                    const Eigen::VectorXd ddu = free_chol.solve(err.second - minv_f.transpose() * hh);
                    ddy += minv_f * ddu;
                    trial.du += ddu;
                }
                trial.dy += ddy;
                const auto ddz = apply_at(p, ddy);
                for (std::size_t b = 0; b < nb; b++) {
                    const RealMatrix dz = sym(ddz[b]);
                    trial.dz[b] += dz;
                    trial.dx[b] -= sym(x[b] * dz * zinv[b]);
                }
                auto trial_err = linear_error(trial);
                if (size_of(trial_err) >= size_of(err)) {
                    break;
                }
                d = std::move(trial);
                err = std::move(trial_err);
            }
            return d;
        };
        auto steps = [&](const Direction &d, double frac) {
            double ap = std::numeric_limits<double>::infinity();
            double ad = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < nb; b++) {
                ap = std::min(ap, max_step(x[b], d.dx[b]));
                ad = std::min(ad, max_step(z[b], d.dz[b]));
            }
            return std::pair<double, double>{std::min(1.0, frac * ap), std::min(1.0, frac * ad)};
        };

        const Direction pred = direction(0, nullptr, nullptr);
        const auto [ap_aff, ad_aff] = steps(pred, 1.0);
        double mu_aff = 0;
        for (std::size_t b = 0; b < nb; b++) {
            mu_aff += ((x[b] + ap_aff * pred.dx[b]).array() * (z[b] + ad_aff * pred.dz[b]).array()).sum();
        }
        mu_aff /= ntot;
        const double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
        const double expo = std::max(1.0, 3 * std::min(ap_aff, ad_aff) * std::min(ap_aff, ad_aff));
        const double sigma = std::pow(ratio, expo);

        // Aiming far below the tolerance pushes the iterate onto the cone
        // boundary, after which steps collapse.
        const double target = std::max(sigma * mu, 1e-2 * opts.gap_tol / ntot);
        const Direction corr = direction(target, &pred.dx, &pred.dz);
        const auto [ap, ad] = steps(corr, opts.step_fraction);
        for (std::size_t b = 0; b < nb; b++) {
            x[b] = sym(x[b] + ap * corr.dx[b]);
            z[b] = sym(z[b] + ad * corr.dz[b]);
        }
        res.u += ap * corr.du;
        res.y += ad * corr.dy;
    }
    const std::string why = res.message.empty() ? "iteration limit reached" : res.message;
    best.status = Status::MaxIterations;
    best.message = why + "; returning best iterate (iteration " + std::to_string(best.iterations) + ")";
    best.iterations = res.iterations;
    return best;
}

}  // namespace detail

inline SdpSolution solve(const SdpProblem &problem, const SolverOptions &opts = {}) {
    const auto start = std::chrono::steady_clock::now();
    validate(problem);
    const auto full = detail::embed(problem);
    SdpSolution sol;
    const auto pre = detail::presolve(full, opts.presolve_tol);
    const double sign = problem.sense == Sense::Maximize ? 1.0 : -1.0;
    auto finish = [&]() {
        sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return sol;
    };
    if (pre.infeasible) {
        sol.status = Status::Infeasible;
        sol.message = "presolve: " + pre.message;
        sol.infeasibility_certificate = pre.certificate;
        return finish();
    }
    sol.dropped_constraints = full.rows() - static_cast<int>(pre.kept.size());
    const auto reduced = detail::select_rows(full, pre.kept);
    const auto r = detail::solve_real(reduced, opts);

    sol.status = r.status;
    sol.message = r.message;
    sol.iterations = r.iterations;
    sol.primal_objective = sign * r.pobj;
    sol.dual_objective = sign * r.dobj;
    sol.gap = r.dobj - r.pobj;
    sol.dual_residual = r.rd;
    if (r.status == Status::Infeasible && !r.certificate.empty()) {
        sol.infeasibility_certificate.assign(static_cast<std::size_t>(full.rows()), 0.0);
        for (std::size_t k = 0; k < pre.kept.size(); k++) {
            sol.infeasibility_certificate[static_cast<std::size_t>(pre.kept[k])] = r.certificate[k];
        }
    }
    sol.dual_multipliers.assign(static_cast<std::size_t>(full.rows()), 0.0);
    for (std::size_t k = 0; k < pre.kept.size(); k++) {
        sol.dual_multipliers[k < pre.kept.size() ? static_cast<std::size_t>(pre.kept[k]) : 0] =
            r.y(static_cast<Eigen::Index>(k));
    }
    sol.free_values.assign(r.u.data(), r.u.data() + r.u.size());
    sol.min_block_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < problem.blocks.size(); k++) {
        HermitianOperator xb(complex_from_embedding(r.x[k]), problem.blocks[k].dims);
        sol.min_block_eigenvalue = std::min(sol.min_block_eigenvalue, min_eigenvalue(xb));
        sol.block_values.push_back(std::move(xb));
    }
    // Residuals of every constraint, dropped ones included, in complex form.
    double worst = 0;
    for (const auto &c : problem.constraints) {
        double lhs = 0;
        for (const auto &t : c.terms) {
            lhs += hs_inner(t.coeff, sol.block_values[static_cast<std::size_t>(t.block)]);
        }
        for (const auto &f : c.free_terms) {
            lhs += f.coeff * sol.free_values[static_cast<std::size_t>(f.var)];
        }
        worst = std::max(worst, std::abs(lhs - c.rhs));
    }
    sol.primal_residual = worst;
    for (std::size_t k = 0; k < problem.blocks.size(); k++) {
        ComplexMatrix s = ComplexMatrix::Zero(problem.blocks[k].dim(), problem.blocks[k].dim());
        for (std::size_t i = 0; i < problem.constraints.size(); i++) {
            for (const auto &t : problem.constraints[i].terms) {
                if (static_cast<std::size_t>(t.block) == k) {
                    s += sol.dual_multipliers[i] * t.coeff.matrix();
                }
            }
        }
        for (const auto &t : problem.objective) {
            if (static_cast<std::size_t>(t.block) == k) {
                s -= sign * t.coeff.matrix();
            }
        }
        sol.dual_slacks.emplace_back((s + s.adjoint()) / 2.0, problem.blocks[k].dims);
    }
    if (sol.status == Status::Optimal && sol.primal_residual > opts.feas_tol) {
        sol.status = Status::MaxIterations;
        sol.message = "embedded solution met tolerances but complex residual " + std::to_string(sol.primal_residual) +
                      " exceeds feas_tol";
    }
    return finish();
}

}  // namespace sqchsh::sdp
