#pragma once

#include "kgcwalk/tape.hpp"

#include <string>
#include <utility>

namespace kgcwalk {

// One LSTM cell: input/forget/output gates with logistic sigmoid, tanh
// candidate. Weights live in a ParamStore under `prefix.*`.
struct LstmParamIds {
    ParamId wi, ui, bi;
    ParamId wf, uf, bf;
    ParamId wo, uo, bo;
    ParamId wc, uc, bc;

    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;

    static LstmParamIds create(ParamStore& store, const std::string& prefix,
                               std::size_t input_dim, std::size_t hidden_dim);
};

// Records one LSTM step on the tape; returns (h, c).
History lstm_step(Tape& tape, ParamStore& store, const LstmParamIds& p,
                  ValueId x, ValueId h_prev, ValueId c_prev);

// Value-level convenience: runs one step on a scratch tape.
std::pair<Vector, Vector> lstm_step(const Vector& x, const Vector& h_prev, const Vector& c_prev,
                                    ParamStore& store, const LstmParamIds& p);

// Feed-forward network: one hidden layer with rectifier activation, linear
// output layer.
struct FfnParamIds {
    ParamId w1, b1;
    ParamId w2, b2;

    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    std::size_t output_dim = 0;

    static FfnParamIds create(ParamStore& store, const std::string& prefix,
                              std::size_t input_dim, std::size_t hidden_dim,
                              std::size_t output_dim);
};

ValueId ffn_apply(Tape& tape, ParamStore& store, const FfnParamIds& p, ValueId x);

Vector ffn(const Vector& x, ParamStore& store, const FfnParamIds& p);

} // namespace kgcwalk
