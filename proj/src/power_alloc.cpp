// SPDX-License-Identifier: Apache-2.0
//
// rcisec: secrecy-rate linear precoding for the multi-user MIMO downlink
// Copyright (C) 2026 The rcisec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rcisec/power_alloc.hpp"
#include "rcisec/errors.hpp"
#include "rcisec/large_system.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace rcisec
{
    namespace
    {
        constexpr double ln2 = std::numbers::ln2;
        const double log_floor = std::log(p_floor);

        void check_coeffs(const CrossGains &g, const std::vector<TangentCoeffs> &coeffs)
        {
            if (coeffs.size() != g.num_users())
                throw DimensionError("Need one set of tangent coefficients per user.");
        }

        // Surrogate value, gradient and Hessian in nats.
        struct SurrogateEval
        {
            double value = 0.0;
            arma::vec grad;
            arma::mat hess;
        };

        SurrogateEval surrogate(const CrossGains &g, const arma::vec &x, const std::vector<TangentCoeffs> &coeffs,
                                bool derivatives)
        {
            const arma::uword K = g.num_users();
            const arma::vec p = arma::exp(x);
            SurrogateEval out;
            if (derivatives)
            {
                out.grad.zeros(K);
                out.hess.zeros(K, K);
            }

            arma::vec q(K);
            for (arma::uword k = 0; k < K; ++k)
            {
                const double a = coeffs[k].a;
                if (a > 0.0)
                {
                    const double interference = g.interference(k, p) + g.sigma2;
                    out.value += a * (x(k) + std::log(g.signal(k)) - std::log(interference)) + coeffs[k].b;
                    if (derivatives)
                    {
                        // d/dx log I_k = q_k with q_kk = 0
                        for (arma::uword m = 0; m < K; ++m)
                            q(m) = (m == k) ? 0.0 : p(m) * g.gain(k, m) / interference;
                        out.grad(k) += a;
                        out.grad -= a * q;
                        out.hess -= a * (arma::diagmat(q) - q * q.t());
                    }
                }
                else
                    out.value += coeffs[k].b;

                const double leak = p(k) * g.leakage(k) / g.sigma2;
                out.value -= std::log1p(leak);
                if (derivatives)
                {
                    const double u = leak / (1.0 + leak);
                    out.grad(k) -= u;
                    out.hess(k, k) -= u * (1.0 - u);
                }
            }
            return out;
        }

        // Log-barrier of the feasible set; +inf outside.
        double barrier(const CrossGains &g, const arma::vec &x)
        {
            const double slack = 1.0 - arma::dot(arma::exp(x), g.norms_sq);
            if (!(slack > 0.0))
                return std::numeric_limits<double>::infinity();
            double b = -std::log(slack);
            for (double v : x)
            {
                if (!(v > log_floor))
                    return std::numeric_limits<double>::infinity();
                b -= std::log(v - log_floor);
            }
            return b;
        }

        bool feasible(const CrossGains &g, const arma::vec &x, double slack)
        {
            return arma::all(x >= log_floor - 1e-12) && arma::dot(arma::exp(x), g.norms_sq) <= 1.0 + slack;
        }

        // Pulls a point strictly inside the feasible set.
        arma::vec make_interior(const CrossGains &g, arma::vec x)
        {
            x = arma::clamp(x, log_floor + 1e-3, std::numeric_limits<double>::max());
            const double used = arma::dot(arma::exp(x), g.norms_sq);
            const double target = 1.0 - 1e-6;
            if (used > target)
            {
                x -= std::log(used / target);
                x = arma::clamp(x, log_floor + 1e-3, std::numeric_limits<double>::max());
                // still too much power when every user sits near the floor: spread the budget evenly
                if (arma::dot(arma::exp(x), g.norms_sq) > target)
                    x = arma::log(target / (g.norms_sq * double(g.num_users())));
            }
            return x;
        }

        // Solves hess dx = -grad with Jacobi scaling; the barrier terms make the diagonal span many decades.
        bool newton_direction(const arma::mat &hess, const arma::vec &grad, arma::vec &dx)
        {
            const arma::vec d = 1.0 / arma::sqrt(hess.diag());
            if (!d.is_finite())
                return false;
            const arma::mat scaled = arma::symmatu((hess.each_col() % d).each_row() % d.t());
            arma::mat R;
            arma::vec y;
            if (arma::chol(R, scaled))
                y = arma::solve(arma::trimatu(R), arma::solve(arma::trimatl(R.t()), -(d % grad)));
            else if (!arma::solve(y, scaled, -(d % grad)))
                return false;
            dx = d % y;
            return dx.is_finite();
        }

        // KKT residual of the inner problem at x (nats): the largest of the stationarity error on
        // users above the floor, the sign violation on users at the floor, and lambda * slack.
        double kkt_residual(const CrossGains &g, const arma::vec &x, const std::vector<TangentCoeffs> &coeffs)
        {
            const arma::vec grad = surrogate(g, x, coeffs, true).grad;
            const arma::vec c = arma::exp(x) % g.norms_sq;
            const double slack = std::max(0.0, 1.0 - arma::accu(c));
            const arma::uvec at_floor = x <= log_floor + 1e-6;
            double num = 0.0, den = 0.0;
            for (arma::uword k = 0; k < x.n_elem; ++k)
                if (!at_floor(k))
                {
                    num += grad(k) * c(k);
                    den += c(k) * c(k);
                }
            const double lambda = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            double r = lambda * slack;
            for (arma::uword k = 0; k < x.n_elem; ++k)
            {
                const double e = grad(k) - lambda * c(k);
                r = std::max(r, at_floor(k) ? std::max(e, 0.0) : std::abs(e));
            }
            return r;
        }

        arma::vec to_log_powers(const arma::vec &p)
        {
            arma::vec x(p.n_elem);
            for (arma::uword k = 0; k < p.n_elem; ++k)
                x(k) = std::max(std::log(std::max(p(k), p_floor)), log_floor);
            return x;
        }

        // Unclipped secrecy sum-rate (bits).
        double unclipped_rate(const CrossGains &g, const arma::vec &p)
        {
            return secrecy_sum_rate_pa(g, p).unclipped_sum_bits();
        }

        // Sets every user with a negative secrecy-rate term to the power floor. Muting a user only
        // removes interference for the others and leaves their leakage unchanged.
        arma::vec mute_negative_users(const CrossGains &g, arma::vec p)
        {
            const SecrecyRateReport r = secrecy_sum_rate_pa(g, p);
            for (arma::uword k = 0; k < p.n_elem; ++k)
                if (r.per_user[k].clipped)
                    p(k) = p_floor;
            return p;
        }

        std::vector<TangentCoeffs> anchors_at(const CrossGains &g, const arma::vec &p)
        {
            const SecrecyRateReport r = secrecy_sum_rate_pa(g, p);
            std::vector<TangentCoeffs> out;
            out.reserve(p.n_elem);
            for (const auto &u : r.per_user)
                out.push_back(tangent_coeffs(u.sinr.intended));
            return out;
        }
    }

    double TangentCoeffs::bound(double z) const
    {
        if (a == 0.0)
            return b;
        return a * std::log(z) + b;
    }

    TangentCoeffs tangent_coeffs(double z0)
    {
        if (!(z0 >= 0.0) || !std::isfinite(z0))
            throw DomainError("tangent_coeffs requires a finite z0 >= 0");
        if (z0 == 0.0)
            return {0.0, 0.0};
        const double a = z0 / (1.0 + z0);
        return {a, std::log1p(z0) - a * std::log(z0)};
    }

    void to_json(nlohmann::json &j, const SolveDiagnostics &d)
    {
        j = {{"objective_trace", d.objective_trace},
             {"outer_iterations", d.outer_iterations},
             {"inner_iterations", d.inner_iterations},
             {"kkt_residual", d.kkt_residual},
             {"converged", d.converged}};
    }

    void from_json(const nlohmann::json &j, SolveDiagnostics &d)
    {
        d.objective_trace = j.at("objective_trace").get<std::vector<double>>();
        d.outer_iterations = j.at("outer_iterations").get<int>();
        d.inner_iterations = j.at("inner_iterations").get<int>();
        d.kkt_residual = j.at("kkt_residual").get<double>();
        d.converged = j.at("converged").get<bool>();
    }

    double pa_objective(const CrossGains &gains, const arma::vec &log_p, const std::vector<TangentCoeffs> &coeffs)
    {
        check_coeffs(gains, coeffs);
        if (log_p.n_elem != gains.num_users())
            throw DimensionError("Log-power vector length does not match the number of users.");
        return surrogate(gains, log_p, coeffs, false).value / ln2;
    }

    double pa_objective(const ChannelMatrix &H, const PrecoderMatrix &W, const arma::vec &log_p, double sigma2,
                        const std::vector<TangentCoeffs> &coeffs)
    {
        return pa_objective(cross_gains(H, W, sigma2), log_p, coeffs);
    }

    InnerSolveResult solve_inner_convex(const CrossGains &g, const std::vector<TangentCoeffs> &coeffs, double tol,
                                        std::optional<arma::vec> warm_start)
    {
        check_coeffs(g, coeffs);
        if (!(tol > 0.0))
            throw DomainError("solve_inner_convex requires tol > 0");
        const arma::uword K = g.num_users();
        if (arma::any(g.norms_sq <= 0.0))
            throw ZeroChannel("solve_inner_convex: a precoder column has zero norm");

        if (warm_start && warm_start->n_elem != K)
            throw DimensionError("Warm start has the wrong length.");

        // a warm start that already satisfies the KKT conditions is returned as is
        if (warm_start && feasible(g, *warm_start, power_budget_slack))
        {
            const double r = kkt_residual(g, *warm_start, coeffs);
            if (r <= tol)
            {
                InnerSolveResult out;
                out.log_p = *warm_start;
                out.objective = surrogate(g, *warm_start, coeffs, false).value / ln2;
                out.diagnostics.objective_trace = {out.objective};
                out.diagnostics.kkt_residual = r;
                out.diagnostics.converged = true;
                return out;
            }
        }

        // default start: equal power at the full budget
        const arma::vec x_start =
            warm_start ? *warm_start : arma::vec(K, arma::fill::value(std::log(1.0 / arma::accu(g.norms_sq))));
        arma::vec x = make_interior(g, x_start);

        const double m = double(K + 1);
        const double t_final = m / tol;
        constexpr double mu = 10.0;
        constexpr double newton_eps = 1e-10;
        constexpr int max_newton_per_stage = 200;
        // damped Newton needs O(t) steps from an off-centre start, so the first stage stays small
        constexpr double t_initial_max = 1.0;

        auto barrier_grad = [&](const arma::vec &v, arma::vec &grad, arma::mat &hess)
        {
            const arma::vec e = arma::exp(v) % g.norms_sq;
            const double slack = 1.0 - arma::accu(e);
            const arma::vec d = v - log_floor;
            grad = e / slack - 1.0 / d;
            hess = arma::diagmat(e / slack + 1.0 / arma::square(d)) + e * e.t() / (slack * slack);
        };

        // Initial barrier weight: the t that best centres the starting point.
        double t = 1.0;
        {
            const SurrogateEval s = surrogate(g, x, coeffs, true);
            arma::vec bg;
            arma::mat bh;
            barrier_grad(x, bg, bh);
            const double denom = arma::dot(s.grad, s.grad);
            if (denom > 0.0)
            {
                const double t_ls = arma::dot(s.grad, bg) / denom;
                if (std::isfinite(t_ls))
                    t = std::clamp(t_ls, 1.0, std::min(t_initial_max, t_final));
            }
        }

        SolveDiagnostics diag;
        bool ok = true;
        while (true)
        {
            auto psi = [&](const arma::vec &v)
            {
                const double b = barrier(g, v);
                if (!std::isfinite(b))
                    return std::numeric_limits<double>::infinity();
                return -t * surrogate(g, v, coeffs, false).value + b;
            };

            int steps = 0;
            double psi_x = psi(x);
            for (; steps < max_newton_per_stage; ++steps)
            {
                const SurrogateEval s = surrogate(g, x, coeffs, true);
                arma::vec bg;
                arma::mat bh;
                barrier_grad(x, bg, bh);
                const arma::vec grad = -t * s.grad + bg;
                const arma::mat hess = -t * s.hess + bh;

                arma::vec dx;
                if (!newton_direction(hess, grad, dx))
                {
                    ok = false;
                    break;
                }
                const double decrement_sq = -arma::dot(grad, dx);
                if (!(decrement_sq > 2.0 * std::max(newton_eps, 1e-15 * std::abs(psi_x))))
                    break;

                double step = 1.0;
                const double slope = arma::dot(grad, dx);
                arma::vec x_new = x + dx;
                double psi_new = psi(x_new);
                while (!(psi_new <= psi_x + 0.25 * step * slope) && step > 1e-14)
                {
                    step *= 0.5;
                    x_new = x + step * dx;
                    psi_new = psi(x_new);
                }
                if (step <= 1e-14)
                    break;
                x = std::move(x_new);
                psi_x = psi_new;
                ++diag.inner_iterations;
            }
            if (steps == max_newton_per_stage)
                ok = false;
            ++diag.outer_iterations;

            if (m / t <= tol * (1.0 + 1e-12) || !ok)
                break;
            t = std::min(mu * t, t_final);
        }

        InnerSolveResult out;
        out.log_p = x;
        out.objective = surrogate(g, x, coeffs, false).value / ln2;
        diag.kkt_residual = m / t;

        // never return something worse than a feasible warm start
        if (warm_start && feasible(g, *warm_start, power_budget_slack))
        {
            const double ws = surrogate(g, *warm_start, coeffs, false).value / ln2;
            if (ws > out.objective)
            {
                out.log_p = *warm_start;
                out.objective = ws;
            }
        }
        diag.objective_trace = {out.objective};
        diag.converged = ok && diag.kkt_residual <= tol * (1.0 + 1e-12);
        out.diagnostics = std::move(diag);
        return out;
    }

    InnerSolveResult solve_inner_convex(const ChannelMatrix &H, const PrecoderMatrix &W,
                                        const std::vector<TangentCoeffs> &coeffs, double sigma2, double tol,
                                        std::optional<arma::vec> warm_start)
    {
        return solve_inner_convex(cross_gains(H, W, sigma2), coeffs, tol, std::move(warm_start));
    }

    PowerAllocationResult sca_power_allocation(const CrossGains &g, const arma::vec &initial_powers,
                                               const ScaOptions &options)
    {
        const arma::uword K = g.num_users();
        if (initial_powers.n_elem != K)
            throw DimensionError("Initial power vector has the wrong length.");
        if (arma::dot(initial_powers, g.norms_sq) > 1.0 + power_budget_slack)
            throw PowerBudgetExceeded("Initial powers violate the transmit budget.");

        SolveDiagnostics diag;

        // First subproblem with a = 1, b = 0 (log z <= log(1 + z)).
        const std::vector<TangentCoeffs> first(K, TangentCoeffs::high_snr());
        const InnerSolveResult r0 = solve_inner_convex(g, first, options.inner_tol, to_log_powers(initial_powers));
        diag.inner_iterations += r0.diagnostics.inner_iterations;

        // The high-SNR subproblem carries no ascent guarantee, so keep the better of it and the start.
        arma::vec p = mute_negative_users(g, arma::clamp(initial_powers, p_floor, arma::datum::inf));
        double rate = unclipped_rate(g, p);
        {
            const arma::vec p0 = mute_negative_users(g, arma::exp(r0.log_p));
            const double rate0 = unclipped_rate(g, p0);
            if (rate0 > rate)
            {
                p = p0;
                rate = rate0;
            }
        }
        diag.objective_trace.push_back(rate);
        diag.kkt_residual = r0.diagnostics.kkt_residual;

        for (int t = 1; t <= options.max_outer; ++t)
        {
            diag.outer_iterations = t;
            const std::vector<TangentCoeffs> coeffs = anchors_at(g, p);
            const InnerSolveResult r = solve_inner_convex(g, coeffs, options.inner_tol, to_log_powers(p));
            diag.inner_iterations += r.diagnostics.inner_iterations;
            diag.kkt_residual = r.diagnostics.kkt_residual;

            const arma::vec p_next = mute_negative_users(g, arma::exp(r.log_p));
            const double rate_next = unclipped_rate(g, p_next);
            if (rate_next < rate)
            {
                // only round-off can get here; the previous iterate is a fixed point
                diag.converged = true;
                break;
            }
            const double gain = rate_next - rate;
            p = p_next;
            rate = rate_next;
            diag.objective_trace.push_back(rate);
            if (gain < options.tol)
            {
                diag.converged = true;
                break;
            }
        }

        PowerAllocationResult out;
        out.powers = PowerVector::from_powers(p);
        out.report = secrecy_sum_rate_pa(g, out.powers.p());
        out.diagnostics = std::move(diag);
        return out;
    }

    PowerAllocationResult sca_power_allocation(const ChannelMatrix &H, double alpha, double sigma2,
                                               const ScaOptions &options)
    {
        const PrecoderMatrix W = rci_precoder(H, alpha);
        const CrossGains g = cross_gains(H, W, sigma2);
        PowerAllocationResult out = sca_power_allocation(g, equal_power(W).p(), options);
        out.alpha = alpha;
        return out;
    }

    namespace
    {
        // Rate as a function of alpha with the power vector held at a fixed share of the budget.
        struct AlphaObjective
        {
            const ChannelMatrix &H;
            double sigma2;
            arma::vec p;
            double budget;

            double operator()(double alpha) const
            {
                const PrecoderMatrix W = rci_precoder(H, alpha);
                const CrossGains g = cross_gains(H, W, sigma2);
                const double used = arma::dot(p, g.norms_sq);
                return secrecy_sum_rate_pa(g, p * (budget / used)).sum_bits;
            }

            arma::vec powers_at(double alpha) const
            {
                const PrecoderMatrix W = rci_precoder(H, alpha);
                return p * (budget / arma::dot(p, W.column_norms_sq()));
            }
        };

        // Steepest ascent on alpha with central-difference slopes and Armijo backtracking.
        double alpha_ascent(const AlphaObjective &f, double alpha, double lo, double hi, int max_steps)
        {
            constexpr double armijo_c = 1e-4;
            double value = f(alpha);
            for (int it = 0; it < max_steps; ++it)
            {
                double h = std::max(1e-6, 1e-4 * alpha);
                double a_lo = std::max(lo, alpha - h), a_hi = std::min(hi, alpha + h);
                if (!(a_hi > a_lo))
                    break;
                const double slope = (f(a_hi) - f(a_lo)) / (a_hi - a_lo);
                if (!std::isfinite(slope) || std::abs(slope) < 1e-12)
                    break;

                // first trial moves alpha by its own magnitude in the ascent direction
                const double direction = slope > 0.0 ? alpha : -alpha;
                double step = 1.0;
                bool accepted = false;
                double cand = alpha, cand_value = value;
                for (int bt = 0; bt < 40; ++bt, step *= 0.5)
                {
                    cand = std::clamp(alpha + step * direction, lo, hi);
                    cand_value = f(cand);
                    if (cand_value >= value + armijo_c * slope * (cand - alpha) && cand != alpha)
                    {
                        accepted = true;
                        break;
                    }
                }
                if (!accepted)
                    break;
                const double moved = std::abs(cand - alpha);
                const double improvement = cand_value - value;
                alpha = cand;
                value = cand_value;
                if (moved < 1e-6 * alpha || improvement < 1e-10)
                    break;
            }
            return alpha;
        }
    }

    JointResult joint_optimize(const ChannelMatrix &H, double sigma2, const JointOptions &options)
    {
        if (!(sigma2 > 0.0))
            throw DomainError("joint_optimize requires sigma2 > 0");
        const int K = int(H.num_users());
        const double rho = 1.0 / sigma2;
        const double lo = options.alpha_min;
        const double hi = options.alpha_max.value_or(10.0 * K);

        JointResult out;
        out.alpha_initial = std::clamp(large_system::alpha_ls(rho, K), lo, hi);
        double alpha = out.alpha_initial;

        // Start from the fixed-alpha solution at alpha_LS so the joint result can only improve on it.
        PowerAllocationResult current = sca_power_allocation(H, alpha, sigma2, options.sca);
        SolveDiagnostics diag;
        diag.inner_iterations = current.diagnostics.inner_iterations;
        diag.kkt_residual = current.diagnostics.kkt_residual;
        diag.objective_trace.push_back(current.report.sum_bits);
        out.alpha_trace.push_back(alpha);

        for (int t = 1; t <= options.max_outer; ++t)
        {
            diag.outer_iterations = t;
            arma::vec p = current.powers.p();
            p = arma::clamp(p, p_floor, arma::datum::inf);
            const double budget = std::min(1.0, arma::dot(p, rci_precoder(H, alpha).column_norms_sq()));
            const AlphaObjective f{H, sigma2, p, budget};

            const double alpha_new = alpha_ascent(f, alpha, lo, hi, options.max_alpha_steps);
            const PrecoderMatrix W = rci_precoder(H, alpha_new);
            const CrossGains g = cross_gains(H, W, sigma2);
            PowerAllocationResult next = sca_power_allocation(g, f.powers_at(alpha_new), options.sca);
            next.alpha = alpha_new;
            diag.inner_iterations += next.diagnostics.inner_iterations;
            diag.kkt_residual = next.diagnostics.kkt_residual;

            const double previous = diag.objective_trace.back();
            if (next.report.sum_bits < previous)
            {
                diag.converged = true;
                break;
            }
            alpha = alpha_new;
            current = std::move(next);
            diag.objective_trace.push_back(current.report.sum_bits);
            out.alpha_trace.push_back(alpha);
            if (current.report.sum_bits - previous < options.tol)
            {
                diag.converged = true;
                break;
            }
        }

        out.alpha = alpha;
        out.powers = current.powers;
        out.report = current.report;
        out.diagnostics = std::move(diag);
        return out;
    }
}
