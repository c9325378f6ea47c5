#ifndef RSRD_HARNESS_HPP
#define RSRD_HARNESS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "rsrd/channel.hpp"
#include "rsrd/codebook.hpp"
#include "rsrd/distortion.hpp"
#include "rsrd/rd_closed.hpp"
#include "rsrd/rd_numeric.hpp"
#include "rsrd/rng.hpp"
#include "rsrd/rs.hpp"

namespace rsrd {

struct FrameContext {
    const RSCode& code;
    const DistortionSpec& spec;
    const ReliabilityMatrix& rel;
    const std::vector<gf_elem>& transmitted;
    const Pattern& x;  // error pattern in the spec's source alphabet
};

struct FrameOutcome {
    bool success = false;         // ML-selected codeword equals the transmitted one
    bool oracle_failure = false;  // min distortion over the codebook >= threshold
    bool ml_miss = false;         // transmitted on the list but not selected
    std::int64_t min_dist_num = 0;
    double min_dist = 0.0;
    int candidates = 0;
    int a_mismatch = 0;  // ASD trials where Condition 2 and the distortion predicate disagree
};

namespace detail {

inline double ml_metric(const ReliabilityMatrix& rel, const std::vector<gf_elem>& cw) {
    double acc = 0.0;
    for (int i = 0; i < rel.n; ++i) acc += std::log(rel.prob(cw[i], i));
    return acc;
}

// Errors-and-erasures trials: realize each pattern as hard decisions plus
// an erasure set, decode with BM, then pick the ML candidate.
inline FrameOutcome decode_frame_bm(const FrameContext& ctx, const Codebook& cb) {
    const auto& code = ctx.code;
    const auto& rel = ctx.rel;
    const int n = code.n();
    FrameOutcome out;

    std::vector<gf_elem> base_hd(n);
    for (int i = 0; i < n; ++i) base_hd[i] = rel.ranked(i, 0);
    const auto base_synd = code.syndromes(base_hd);

    std::vector<std::vector<gf_elem>> cands;
    std::vector<double> metrics;
    bool transmitted_listed = false;
    std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();

    std::vector<gf_elem> word(n);
    std::vector<gf_elem> synd;
    std::vector<int> erasures;
    for (const auto& pat : cb.patterns) {
        best_dist = std::min(best_dist, distortion_num(ctx.x, pat, ctx.spec));

        word = base_hd;
        synd = base_synd;
        erasures.clear();
        for (int i = 0; i < n; ++i) {
            Letter l = pat[i];
            if (l == 0) {
                erasures.push_back(i);
            } else if (l >= 2) {
                gf_elem repl = rel.ranked(i, l - 1);
                gf_elem delta = FieldContext::add(word[i], repl);
                if (delta != 0) {
                    code.syndrome_add(synd, i, delta);
                    word[i] = repl;
                }
            }
        }
        if (static_cast<int>(erasures.size()) >= code.d_min()) continue;
        auto res = code.decode_with_syndromes(synd, word, erasures);
        if (!res.ok()) continue;
        bool dup = false;
        for (const auto& c : cands)
            if (c == res.codeword) {
                dup = true;
                break;
            }
        if (dup) continue;
        if (res.codeword == ctx.transmitted) transmitted_listed = true;
        metrics.push_back(ml_metric(rel, res.codeword));
        cands.push_back(std::move(res.codeword));
    }

    out.min_dist_num = best_dist;
    out.min_dist = static_cast<double>(best_dist) / static_cast<double>(ctx.spec.den);
    out.oracle_failure = best_dist >= ctx.spec.thresh_num;
    out.candidates = static_cast<int>(cands.size());
    if (!cands.empty()) {
        size_t best = 0;
        for (size_t c = 1; c < cands.size(); ++c)
            if (metrics[c] > metrics[best]) best = c;
        out.success = cands[best] == ctx.transmitted;
        out.ml_miss = transmitted_listed && !out.success;
    }
    return out;
}

// ASD trials: success judged by the Condition-2 score/cost oracle against
// the transmitted codeword (genie evaluation of p_e; no interpolation).
inline FrameOutcome decode_frame_asd(const FrameContext& ctx, const Codebook& cb) {
    const auto& code = ctx.code;
    FrameOutcome out;
    const auto cost2 = type_cost2_table(ctx.spec.types);
    std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();
    bool any_success = false;
    for (const auto& pat : cb.patterns) {
        std::int64_t d = distortion_num(ctx.x, pat, ctx.spec);
        best_dist = std::min(best_dist, d);
        auto sc = score_cost_from_patterns(ctx.x, pat, ctx.spec.types, cost2);
        bool ok = asd_success(sc, code);
        if (ok != (d < ctx.spec.thresh_num)) ++out.a_mismatch;
        any_success = any_success || ok;
    }
    out.min_dist_num = best_dist;
    out.min_dist = static_cast<double>(best_dist) / static_cast<double>(ctx.spec.den);
    out.oracle_failure = best_dist >= ctx.spec.thresh_num;
    out.candidates = any_success ? 1 : 0;
    out.success = any_success;
    out.ml_miss = false;
    return out;
}

// Bit-level ASD trials via the bit-level multiplicity assignment and the
// same Condition-2 oracle.
inline FrameOutcome decode_frame_bit_asd(const FrameContext& ctx, const Codebook& cb) {
    const auto& code = ctx.code;
    const auto& rel = ctx.rel;
    const int n = code.n(), eta = rel.eta;
    FrameOutcome out;
    std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();
    bool any_success = false;
    for (const auto& pat : cb.patterns) {
        std::int64_t d = distortion_num(ctx.x, pat, ctx.spec);
        best_dist = std::min(best_dist, d);
        std::int64_t score = 0, cost2 = 0;
        for (int i = 0; i < n; ++i) {
            int erased = 0;
            bool unerased_ok = true;
            for (int b = 0; b < eta; ++b) {
                size_t idx = static_cast<size_t>(i) * eta + b;
                if (pat[idx] == 0)
                    ++erased;
                else if (ctx.x[idx] == 0)
                    unerased_ok = false;
            }
            if (erased == 0) {
                cost2 += 6;  // multiplicity 2 on one symbol
                if (unerased_ok) score += 2;
            } else if (erased == 1) {
                cost2 += 4;  // multiplicity 1 on two candidates
                if (unerased_ok) score += 1;
            }
        }
        ScoreCost sc{score, cost2 / 2};
        bool ok = asd_success(sc, code);
        if (ok != (d < ctx.spec.thresh_num)) ++out.a_mismatch;
        any_success = any_success || ok;
    }
    out.min_dist_num = best_dist;
    out.min_dist = static_cast<double>(best_dist) / static_cast<double>(ctx.spec.den);
    out.oracle_failure = best_dist >= ctx.spec.thresh_num;
    out.candidates = any_success ? 1 : 0;
    out.success = any_success;
    return out;
}

}  // namespace detail

inline FrameOutcome decode_frame(const FrameContext& ctx, const Codebook& cb) {
    switch (ctx.spec.kind) {
        case SchemeKind::asd:
            return detail::decode_frame_asd(ctx, cb);
        case SchemeKind::bit_asd:
            return detail::decode_frame_bit_asd(ctx, cb);
        default:
            return detail::decode_frame_bm(ctx, cb);
    }
}

struct SimConfig {
    int n = 255, k = 239, eta = 8;
    ChannelSpec::Kind channel = ChannelSpec::Kind::awgn_bpsk;
    SnrRef snr_ref = SnrRef::ebn0_db;
    std::vector<double> grid;  // SNR dB points, or correct-symbol p for m-SC
    SchemeSpec scheme = SchemeSpec::mbm_l(1);
    enum class Approach { rd, rde };
    Approach approach = Approach::rd;
    double rate = 0.0;
    double d_target = 0.0;  // 0 -> the scheme's threshold
    enum class Source { algorithm_a, algorithm_b, gmd, sed, singleton, hybrid };
    Source source = Source::algorithm_b;
    int tau = 1000;  // Algorithm B training frames
    int sed_l = 0, sed_f = 0;
    std::string cover = "hm74";  // hybrid prefix: hm74 or golay
    std::uint64_t seed = 1;
    std::uint64_t max_frames = 10000;
    std::uint64_t min_errors = 200;
    int threads = 1;
    bool heuristic_a_select = false;
    SolverParams solver;
};

struct GridResult {
    double param = 0.0;
    std::uint64_t frames = 0, frame_errors = 0, oracle_failures = 0, ml_misses = 0;
    double fer = 0.0, ci_lo = 0.0, ci_hi = 0.0;
    double mean_min_distortion = 0.0;
    double mean_candidates = 0.0;
    std::uint64_t a_mismatch_trials = 0;
    double f_predicted = 0.0;  // RDE exponent of the training profile (rde approach)
    double wall_seconds = 0.0;
};

struct SimResult {
    std::vector<GridResult> points;
    int chosen_a = 0;  // ASD a actually used (last grid point)
};

namespace detail {

struct GridPlan {
    DistortionSpec spec;
    std::vector<std::vector<double>> q_rows;  // reliability order (empty for references)
    CoveringCode cover;
    Codebook fixed_ranked;  // gmd/sed/singleton patterns in reliability order
    double f_predicted = 0.0;
    int a_used = 0;
    bool per_frame_q = false;  // Algorithm A: solve Q from each frame's posterior
};

inline std::vector<std::vector<double>> solve_q(const SourceDist& P, const DistortionSpec& spec,
                                                SimConfig::Approach approach, double rate,
                                                double d_target, const SolverParams& params,
                                                double* f_out) {
    if (approach == SimConfig::Approach::rd) {
        auto pt = rd_at_rate(P, spec, rate, params);
        if (pt.status != RDEPoint::Status::ok)
            throw UsageError("RD solve failed (rate bracket)");
        if (f_out) *f_out = 0.0;
        return pt.q;
    }
    double d = d_target > 0.0 ? d_target : spec.d_thresh;
    auto pt = rde_at(P, spec, rate, d, params);
    if (pt.status == RDEPoint::Status::infeasible)
        throw UsageError("RDE solve infeasible: D target below the RD curve at this rate");
    if (pt.status != RDEPoint::Status::ok) throw UsageError("RDE solve failed (bracket)");
    if (f_out) *f_out = pt.f;
    return pt.q;
}

}  // namespace detail

inline SimResult fer_campaign(const SimConfig& cfg) {
    if (cfg.grid.empty()) throw UsageError("simulation grid is empty");
    if (cfg.max_frames < 1) throw UsageError("frame budget must be >= 1");
    if (cfg.rate < 0.0) throw UsageError("rate must be >= 0");

    auto field = std::make_shared<const FieldContext>(cfg.eta);
    RSCode code(cfg.n, cfg.k, field);
    const int m = static_cast<int>(field->size());
    SimResult result;

    for (size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        const double param = cfg.grid[gi];
        ChannelSpec ch{cfg.channel, param, cfg.snr_ref};
        const bool msc = cfg.channel == ChannelSpec::Kind::msc;
        auto t0 = std::chrono::steady_clock::now();

        detail::GridPlan plan;
        SchemeSpec scheme = cfg.scheme;

        // training profile (analytic for m-SC, Algorithm B elsewhere)
        SourceDist P;
        if (cfg.source != SimConfig::Source::gmd && cfg.source != SimConfig::Source::sed) {
            if (msc) {
                P = msc_source_dist(m, cfg.n, param, scheme.kind,
                                    scheme.kind == SchemeKind::asd ? std::max(scheme.ell, 1)
                                                                   : scheme.ell,
                                    cfg.eta);
            } else {
                auto prof = train_profile(code, ch, cfg.tau, cfg.seed);
                P = source_dist_from_profile(prof, scheme.kind,
                                             scheme.kind == SchemeKind::asd
                                                 ? std::max(scheme.ell, 1)
                                                 : scheme.ell);
            }
        }

        if (scheme.kind == SchemeKind::asd) {
            if (scheme.types.empty()) scheme.types = allowable_set(scheme.mu, scheme.ell);
            if (cfg.heuristic_a_select) {
                auto ha = heuristic_a_impl(
                    P, code, scheme.mu, scheme.ell, scheme.types, scheme.relaxed,
                    [&](const DistortionSpec& sp) {
                        double f = 0.0;
                        return detail::solve_q(P, sp, cfg.approach, cfg.rate, 0.0, cfg.solver,
                                               &f);
                    });
                scheme.a = ha.a;
            }
        }
        plan.spec = build_spec(scheme, code);
        plan.a_used = plan.spec.a;

        switch (cfg.source) {
            case SimConfig::Source::algorithm_a:
                plan.per_frame_q = true;
                if (cfg.approach == SimConfig::Approach::rde) {
                    // report the profile-level exponent even when Q is per frame
                    detail::solve_q(P, plan.spec, cfg.approach, cfg.rate, cfg.d_target,
                                    cfg.solver, &plan.f_predicted);
                }
                if (msc) {
                    // i.i.d. positions: the per-frame posterior equals the profile
                    plan.per_frame_q = false;
                    plan.q_rows = detail::solve_q(P, plan.spec, cfg.approach, cfg.rate,
                                                  cfg.d_target, cfg.solver, &plan.f_predicted);
                }
                break;
            case SimConfig::Source::algorithm_b:
                plan.q_rows = detail::solve_q(P, plan.spec, cfg.approach, cfg.rate, cfg.d_target,
                                              cfg.solver, &plan.f_predicted);
                break;
            case SimConfig::Source::gmd:
                plan.fixed_ranked = reference_codebook(ReferenceKind::gmd, code, {});
                break;
            case SimConfig::Source::sed:
                plan.fixed_ranked =
                    reference_codebook(ReferenceKind::sed, code, {}, cfg.sed_l, cfg.sed_f);
                break;
            case SimConfig::Source::singleton: {
                double d = cfg.d_target > 0.0 ? cfg.d_target : plan.spec.d_thresh;
                if (cfg.approach == SimConfig::Approach::rde) {
                    auto r0 = rde_rate0(P, plan.spec, d);
                    if (!r0.feasible)
                        throw UsageError("rate-0 exponent infeasible at this threshold");
                    plan.f_predicted = r0.f;
                    plan.fixed_ranked.patterns = {r0.letters};
                } else {
                    plan.fixed_ranked.patterns = {d_max_letters(P, plan.spec)};
                }
                plan.fixed_ranked.provenance = "singleton";
                break;
            }
            case SimConfig::Source::hybrid: {
                plan.cover =
                    cfg.cover == "golay" ? CoveringCode::golay2312() : CoveringCode::hamming74();
                if (plan.spec.kind != SchemeKind::errors_only)
                    throw UsageError("hybrid codebooks pair with the errors-only scheme");
                double cover_rate = plan.cover.k_c * std::log2(double(plan.cover.ell));
                SourceDist pmrp;
                pmrp.kind = P.kind;
                pmrp.ell = P.ell;
                pmrp.p.assign(P.p.begin() + plan.cover.n_c, P.p.end());
                plan.q_rows = detail::solve_q(pmrp, plan.spec, SimConfig::Approach::rd,
                                              cfg.rate - cover_rate, 0.0, cfg.solver, nullptr);
                break;
            }
        }

        // frame loop, processed in deterministic blocks
        GridResult gr;
        gr.param = param;
        gr.f_predicted = plan.f_predicted;
        const int threads = std::max(1, cfg.threads);
        const std::uint64_t block = static_cast<std::uint64_t>(threads) * 64;
        double dist_acc = 0.0, cand_acc = 0.0;

        std::uint64_t frame = 0;
        while (frame < cfg.max_frames &&
               (gr.frame_errors < cfg.min_errors || gr.frames < 1)) {
            std::uint64_t upto = std::min(cfg.max_frames, frame + block);
            std::vector<FrameOutcome> outcomes(upto - frame);
            const std::vector<int> no_sigma;
            auto worker = [&](int tid) {
                for (std::uint64_t f = frame + tid; f < upto; f += threads) {
                    Rng rng = Rng::derive(cfg.seed, gi + 1, f);
                    std::vector<gf_elem> msg(cfg.k);
                    for (auto& s : msg) s = static_cast<gf_elem>(rng.next_below(m));
                    auto cw = code.encode(msg);
                    auto rel = simulate(code, cw, ch, rng);
                    Pattern x = extract_error_pattern(rel, cw, plan.spec.kind, plan.spec.ell);

                    Codebook cb;
                    const std::vector<int>& sig = msc ? no_sigma : rel.sigma;
                    if (plan.per_frame_q) {
                        auto Pf = source_dist(rel, plan.spec.kind, plan.spec.ell, false);
                        auto q = detail::solve_q(Pf, plan.spec, cfg.approach, cfg.rate,
                                                 cfg.d_target, cfg.solver, nullptr);
                        cb = gen_random(q, plan.spec.rep_min, cfg.rate, rng.next_u64());
                    } else if (!plan.q_rows.empty() && cfg.source != SimConfig::Source::hybrid) {
                        cb = gen_random(plan.q_rows, plan.spec.rep_min, cfg.rate,
                                        rng.next_u64());
                        if (!sig.empty())
                            for (auto& pat : cb.patterns) pat = apply_sigma_inv(pat, sig);
                    } else if (cfg.source == SimConfig::Source::hybrid) {
                        cb = gen_hybrid(plan.cover, plan.q_rows, plan.spec.rep_min, cfg.rate,
                                        sig, rng.next_u64());
                    } else {
                        cb.patterns.reserve(plan.fixed_ranked.patterns.size());
                        for (const auto& pat : plan.fixed_ranked.patterns)
                            cb.patterns.push_back(apply_sigma_inv(pat, sig));
                    }

                    FrameContext ctx{code, plan.spec, rel, cw, x};
                    outcomes[f - frame] = decode_frame(ctx, cb);
                }
            };
            if (threads == 1) {
                worker(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(threads);
                for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
                for (auto& th : pool) th.join();
            }
            for (const auto& oc : outcomes) {
                ++gr.frames;
                if (!oc.success) ++gr.frame_errors;
                if (oc.oracle_failure) ++gr.oracle_failures;
                if (oc.ml_miss) ++gr.ml_misses;
                gr.a_mismatch_trials += oc.a_mismatch;
                dist_acc += oc.min_dist;
                cand_acc += oc.candidates;
            }
            frame = upto;
        }

        gr.fer = gr.frames ? static_cast<double>(gr.frame_errors) / gr.frames : 0.0;
        auto ci = wilson95(gr.frame_errors, gr.frames);
        gr.ci_lo = ci.lo;
        gr.ci_hi = ci.hi;
        gr.mean_min_distortion = gr.frames ? dist_acc / gr.frames : 0.0;
        gr.mean_candidates = gr.frames ? cand_acc / gr.frames : 0.0;
        gr.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.points.push_back(gr);
        result.chosen_a = plan.a_used;
    }
    return result;
}

}  // namespace rsrd

#endif
