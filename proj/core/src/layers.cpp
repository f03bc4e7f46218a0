#include "kgcwalk/layers.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

LstmParamIds LstmParamIds::create(ParamStore& store, const std::string& prefix,
                                  std::size_t input_dim, std::size_t hidden_dim) {
    LstmParamIds p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.wi = store.add_matrix(prefix + ".wi", hidden_dim, input_dim);
    p.ui = store.add_matrix(prefix + ".ui", hidden_dim, hidden_dim);
    p.bi = store.add_vector(prefix + ".bi", hidden_dim);
    p.wf = store.add_matrix(prefix + ".wf", hidden_dim, input_dim);
    p.uf = store.add_matrix(prefix + ".uf", hidden_dim, hidden_dim);
    p.bf = store.add_vector(prefix + ".bf", hidden_dim);
    p.wo = store.add_matrix(prefix + ".wo", hidden_dim, input_dim);
    p.uo = store.add_matrix(prefix + ".uo", hidden_dim, hidden_dim);
    p.bo = store.add_vector(prefix + ".bo", hidden_dim);
    p.wc = store.add_matrix(prefix + ".wc", hidden_dim, input_dim);
    p.uc = store.add_matrix(prefix + ".uc", hidden_dim, hidden_dim);
    p.bc = store.add_vector(prefix + ".bc", hidden_dim);
    return p;
}

namespace {

void check_lstm_shapes(const LstmParamIds& p, std::size_t x, std::size_t h, std::size_t c) {
    if (x != p.input_dim || h != p.hidden_dim || c != p.hidden_dim) {
        std::ostringstream msg;
        msg << "lstm_step: shape mismatch, got x(" << x << ") h(" << h << ") c(" << c
            << ") vs params expecting x(" << p.input_dim << ") h(" << p.hidden_dim << ") c("
            << p.hidden_dim << ")";
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

History lstm_step(Tape& tape, ParamStore& store, const LstmParamIds& p,
                  ValueId x, ValueId h_prev, ValueId c_prev) {
    check_lstm_shapes(p, tape.value(x).size(), tape.value(h_prev).size(),
                      tape.value(c_prev).size());

    auto gate = [&](ParamId w, ParamId u, ParamId b) {
        ValueId pre = tape.add(tape.add(tape.linear(store, w, x), tape.linear(store, u, h_prev)),
                               tape.param_vec(store, b));
        return pre;
    };

    ValueId gi = tape.sigmoid(gate(p.wi, p.ui, p.bi));
    ValueId gf = tape.sigmoid(gate(p.wf, p.uf, p.bf));
    ValueId go = tape.sigmoid(gate(p.wo, p.uo, p.bo));
    ValueId cand = tape.tanh(gate(p.wc, p.uc, p.bc));

    ValueId c = tape.add(tape.mul(gf, c_prev), tape.mul(gi, cand));
    ValueId h = tape.mul(go, tape.tanh(c));
    return History{h, c};
}

std::pair<Vector, Vector> lstm_step(const Vector& x, const Vector& h_prev, const Vector& c_prev,
                                    ParamStore& store, const LstmParamIds& p) {
    Tape tape;
    History out = lstm_step(tape, store, p, tape.input(x), tape.input(h_prev), tape.input(c_prev));
    return {tape.value(out.h), tape.value(out.c)};
}

FfnParamIds FfnParamIds::create(ParamStore& store, const std::string& prefix,
                                std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t output_dim) {
    FfnParamIds p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.output_dim = output_dim;
    p.w1 = store.add_matrix(prefix + ".w1", hidden_dim, input_dim);
    p.b1 = store.add_vector(prefix + ".b1", hidden_dim);
    p.w2 = store.add_matrix(prefix + ".w2", output_dim, hidden_dim);
    p.b2 = store.add_vector(prefix + ".b2", output_dim);
    return p;
}

ValueId ffn_apply(Tape& tape, ParamStore& store, const FfnParamIds& p, ValueId x) {
    if (tape.value(x).size() != p.input_dim) {
        std::ostringstream msg;
        msg << "ffn: shape mismatch, input (" << tape.value(x).size() << ") vs expected ("
            << p.input_dim << ")";
        throw std::invalid_argument(msg.str());
    }
    ValueId hidden = tape.relu(tape.add(tape.linear(store, p.w1, x), tape.param_vec(store, p.b1)));
    return tape.add(tape.linear(store, p.w2, hidden), tape.param_vec(store, p.b2));
}

Vector ffn(const Vector& x, ParamStore& store, const FfnParamIds& p) {
    Tape tape;
    return tape.value(ffn_apply(tape, store, p, tape.input(x)));
}

} // namespace kgcwalk
