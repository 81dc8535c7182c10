#include "fbmre.h"

#include <cstring>
#include <string>

#include "fbmre/errors.hpp"
#include "fbmre/fgn.hpp"
#include "fbmre/fit.hpp"
#include "fbmre/hurst_law.hpp"
#include "fbmre/mc.hpp"
#include "fbmre/runner.hpp"
#include "fbmre/version.hpp"

namespace {

thread_local std::string g_last_error;

fbmre_status fail(fbmre_status code, const char* what) {
    g_last_error = what != nullptr ? what : "";
    return code;
}

template <typename Fn>
fbmre_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FBMRE_OK;
    } catch (const fbmre::ValidationError& e) {
        return fail(FBMRE_ERR_INVALID, e.what());
    } catch (const std::domain_error& e) {
        return fail(FBMRE_ERR_DOMAIN, e.what());
    } catch (const fbmre::SizeExceededError& e) {
        return fail(FBMRE_ERR_SIZE, e.what());
    } catch (const fbmre::EmbeddingNotPsdError& e) {
        return fail(FBMRE_ERR_NOT_PSD, e.what());
    } catch (const fbmre::FactorizationFailedError& e) {
        return fail(FBMRE_ERR_FACTORIZATION, e.what());
    } catch (const fbmre::PreconditionViolatedError& e) {
        return fail(FBMRE_ERR_PRECONDITION, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(FBMRE_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(FBMRE_ERR_RUNTIME, e.what());
    }
}

fbmre::McConfig to_mc_config(const fbmre_mc_config* cfg) {
    fbmre::McConfig out;
    if (cfg == nullptr) throw fbmre::ValidationError("null config");
    out.n_paths = cfg->n_paths;
    out.seed = cfg->seed;
    out.barrier = cfg->barrier;
    out.ci_level = cfg->ci_level;
    out.workers = cfg->workers;
    if (cfg->grid_m > 0) {
        out.grid_rule = fbmre::GridRule::fixed(cfg->grid_m);
    } else {
        out.grid_rule = fbmre::GridRule::paper(cfg->m_min > 0 ? cfg->m_min : 1,
                                               cfg->m_max > 0 ? cfg->m_max : 4096);
    }
    return out;
}

fbmre_estimate to_c(const fbmre::McEstimate& e) {
    return {e.p_hat, e.std_err, e.ci_lo, e.ci_hi, e.n_paths, e.n_hits};
}

} // namespace

extern "C" {

struct fbmre_law {
    fbmre::HurstLaw law;
};

const char* fbmre_version(void) { return fbmre::kVersion; }

const char* fbmre_last_error(void) { return g_last_error.c_str(); }

fbmre_status fbmre_law_create_json(const char* json_text, fbmre_law** out) {
    if (json_text == nullptr || out == nullptr) return fail(FBMRE_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new fbmre_law{fbmre::parse_law_json(json_text)};
    });
}

void fbmre_law_destroy(fbmre_law* law) { delete law; }

fbmre_status fbmre_law_ess_sup(const fbmre_law* law, double* h0) {
    if (law == nullptr || h0 == nullptr) return fail(FBMRE_ERR_INVALID, "null argument");
    return guarded([&] { *h0 = law->law.ess_sup(); });
}

fbmre_status fbmre_law_sample(const fbmre_law* law, uint64_t seed, int64_t n, double* out) {
    if (law == nullptr || out == nullptr || n < 1) {
        return fail(FBMRE_ERR_INVALID, "null argument or nonpositive n");
    }
    return guarded([&] {
        fbmre::NormalRng rng(fbmre::substream_seed(seed, fbmre::StreamDomain::hurst, 0));
        for (int64_t i = 0; i < n; ++i) out[i] = law->law.sample(rng);
    });
}

namespace {

fbmre_status sample_common(bool cholesky, double hurst, double horizon, int64_t m, uint64_t seed,
                           double* out, int64_t out_len) {
    if (out == nullptr) return fail(FBMRE_ERR_INVALID, "null output buffer");
    return guarded([&] {
        const fbmre::GridSpec grid{horizon, m};
        const int64_t need = grid.n_points() + 1;
        if (out_len != need) {
            throw fbmre::ValidationError("output buffer must hold exactly " + std::to_string(need) +
                                         " values");
        }
        fbmre::NormalRng rng(fbmre::substream_seed(seed, fbmre::StreamDomain::path, 0));
        const fbmre::Path p = cholesky ? fbmre::sample_fbm_cholesky(hurst, grid, rng)
                              : hurst == 1.0 ? fbmre::sample_degenerate_h1(grid, rng)
                                             : fbmre::sample_fbm_path(hurst, grid, rng);
        std::memcpy(out, p.values.data(), sizeof(double) * static_cast<std::size_t>(need));
    });
}

} // namespace

fbmre_status fbmre_sample_path(double hurst, double horizon, int64_t points_per_unit,
                               uint64_t seed, double* out, int64_t out_len) {
    return sample_common(false, hurst, horizon, points_per_unit, seed, out, out_len);
}

fbmre_status fbmre_sample_path_cholesky(double hurst, double horizon, int64_t points_per_unit,
                                        uint64_t seed, double* out, int64_t out_len) {
    return sample_common(true, hurst, horizon, points_per_unit, seed, out, out_len);
}

fbmre_status fbmre_persistence_fixed(double hurst, double horizon, const fbmre_mc_config* cfg,
                                     fbmre_estimate* out) {
    if (out == nullptr) return fail(FBMRE_ERR_INVALID, "null output");
    return guarded([&] {
        *out = to_c(fbmre::estimate_persistence_fixed(hurst, horizon, to_mc_config(cfg)));
    });
}

fbmre_status fbmre_persistence_annealed(const fbmre_law* law, double horizon,
                                        const fbmre_mc_config* cfg, fbmre_estimate* out) {
    if (law == nullptr || out == nullptr) return fail(FBMRE_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = to_c(fbmre::estimate_persistence_annealed(law->law, horizon, to_mc_config(cfg)));
    });
}

fbmre_status fbmre_small_barrier(const fbmre_law* law, double epsilon,
                                 const fbmre_mc_config* cfg, fbmre_estimate* out) {
    if (law == nullptr || out == nullptr) return fail(FBMRE_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = to_c(fbmre::estimate_small_barrier(law->law, epsilon, to_mc_config(cfg)));
    });
}

fbmre_status fbmre_fit_exponent(const double* x, const double* p_hat, const double* std_err,
                                int64_t n, fbmre_fit* out) {
    if (x == nullptr || p_hat == nullptr || std_err == nullptr || out == nullptr) {
        return fail(FBMRE_ERR_INVALID, "null argument");
    }
    return guarded([&] {
        std::vector<fbmre::FitPoint> pts(static_cast<std::size_t>(n));
        for (int64_t i = 0; i < n; ++i) {
            pts[static_cast<std::size_t>(i)] = {x[i], p_hat[i], std_err[i]};
        }
        const fbmre::ExponentFit fit = fbmre::fit_exponent(pts);
        *out = {fit.slope, fit.slope_se, fit.intercept, fit.r_squared, fit.n_points};
    });
}

fbmre_status fbmre_predicted_exponent_fixed(double hurst, double* out) {
    if (out == nullptr) return fail(FBMRE_ERR_INVALID, "null output");
    return guarded([&] {
        *out = fbmre::predicted_exponent(fbmre::PredictedExponent::fixed_h(hurst));
    });
}

fbmre_status fbmre_predicted_exponent_annealed(const fbmre_law* law, double* out) {
    if (law == nullptr || out == nullptr) return fail(FBMRE_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = fbmre::predicted_exponent(fbmre::PredictedExponent::annealed(law->law));
    });
}

fbmre_status fbmre_predicted_exponent_small_barrier(const fbmre_law* law, double* out) {
    if (law == nullptr || out == nullptr) return fail(FBMRE_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = fbmre::predicted_exponent(fbmre::PredictedExponent::small_barrier(law->law));
    });
}

fbmre_status fbmre_run_command(const char* command, const char* config_json,
                               const char* out_dir, int* exit_code) {
    if (command == nullptr || config_json == nullptr || out_dir == nullptr ||
        exit_code == nullptr) {
        return fail(FBMRE_ERR_INVALID, "null argument");
    }
    try {
        const fbmre::CommandResult res = fbmre::run_command(command, config_json, out_dir);
        *exit_code = res.exit_code;
        g_last_error = res.exit_code == fbmre::kExitOk ? "" : res.message;
        switch (res.exit_code) {
            case fbmre::kExitOk:
                return FBMRE_OK;
            case fbmre::kExitValidation:
                return FBMRE_ERR_INVALID;
            case fbmre::kExitCheckFailed:
                return FBMRE_ERR_CHECK_FAILED;
            default:
                return FBMRE_ERR_RUNTIME;
        }
    } catch (const std::exception& e) {
        *exit_code = fbmre::kExitNumerical;
        return fail(FBMRE_ERR_RUNTIME, e.what());
    }
}

} // extern "C"
