#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library's tape: plain long-double loops over raw parameter values. Unit
// tests evaluate these to derive expected values and to cross-check frozen
// golden fixtures.

#include "kgcwalk/layers.hpp"
#include "kgcwalk/params.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace refmath {

using ldvec = std::vector<long double>;

inline ldvec to_ld(std::span<const double> v) { return ldvec(v.begin(), v.end()); }

inline ldvec ref_softmax(const ldvec& z) {
    long double m = z[0];
    for (long double x : z) m = std::max(m, x);
    ldvec out(z.size());
    long double sum = 0.0L;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - m);
        sum += out[i];
    }
    for (auto& x : out) x /= sum;
    return out;
}

inline long double ref_sigmoid(long double x) { return 1.0L / (1.0L + std::exp(-x)); }

// y = W x + U h + b with W given row-major as a flat span.
inline ldvec ref_affine(std::span<const double> w, std::size_t rows, std::size_t cols,
                        const ldvec& x, std::span<const double> u, const ldvec& h,
                        std::span<const double> b) {
    ldvec y(rows, 0.0L);
    for (std::size_t r = 0; r < rows; ++r) {
        long double s = b[r];
        for (std::size_t c = 0; c < cols; ++c) s += static_cast<long double>(w[r * cols + c]) * x[c];
        for (std::size_t c = 0; c < rows; ++c) s += static_cast<long double>(u[r * rows + c]) * h[c];
        y[r] = s;
    }
    return y;
}

struct RefLstm {
    const kgcwalk::ParamStore& store;
    const kgcwalk::LstmParamIds& p;

    // Standard cell: i/f/o gates with sigmoid, tanh candidate.
    std::pair<ldvec, ldvec> step(const ldvec& x, const ldvec& h, const ldvec& c) const {
        const std::size_t hd = p.hidden_dim;
        const std::size_t in = p.input_dim;
        auto gate = [&](kgcwalk::ParamId w, kgcwalk::ParamId u, kgcwalk::ParamId b) {
            return ref_affine(store.values(w), hd, in, x, store.values(u), h, store.values(b));
        };
        ldvec gi = gate(p.wi, p.ui, p.bi);
        ldvec gf = gate(p.wf, p.uf, p.bf);
        ldvec go = gate(p.wo, p.uo, p.bo);
        ldvec gc = gate(p.wc, p.uc, p.bc);
        ldvec c_new(hd), h_new(hd);
        for (std::size_t k = 0; k < hd; ++k) {
            const long double i_k = ref_sigmoid(gi[k]);
            const long double f_k = ref_sigmoid(gf[k]);
            const long double o_k = ref_sigmoid(go[k]);
            const long double cand = std::tanh(gc[k]);
            c_new[k] = f_k * c[k] + i_k * cand;
            h_new[k] = o_k * std::tanh(c_new[k]);
        }
        return {h_new, c_new};
    }
};

struct RefFfn {
    const kgcwalk::ParamStore& store;
    const kgcwalk::FfnParamIds& p;

    ldvec apply(const ldvec& x) const {
        auto w1 = store.values(p.w1);
        auto b1 = store.values(p.b1);
        auto w2 = store.values(p.w2);
        auto b2 = store.values(p.b2);
        ldvec hidden(p.hidden_dim);
        for (std::size_t r = 0; r < p.hidden_dim; ++r) {
            long double s = b1[r];
            for (std::size_t c = 0; c < p.input_dim; ++c) {
                s += static_cast<long double>(w1[r * p.input_dim + c]) * x[c];
            }
            hidden[r] = s > 0.0L ? s : 0.0L;
        }
        ldvec out(p.output_dim);
        for (std::size_t r = 0; r < p.output_dim; ++r) {
            long double s = b2[r];
            for (std::size_t c = 0; c < p.hidden_dim; ++c) {
                s += static_cast<long double>(w2[r * p.hidden_dim + c]) * hidden[c];
            }
            out[r] = s;
        }
        return out;
    }
};

} // namespace refmath
