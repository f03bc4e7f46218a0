#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgcwalk/encoder.hpp"

#include "support/reference_math.hpp"

#include <cmath>

using namespace kgcwalk;

namespace {

Vocab fixture_vocab() {
    // Ids: <oov>=0, who=1, signed=2, law=3.
    return Vocab::from_tokens({"<oov>", "who", "signed", "law"});
}

} // namespace

TEST_CASE("tokenize lowercases, splits, and falls back to OOV") {
    Vocab vocab = fixture_vocab();
    CHECK(vocab.tokenize("Who Signed it") == std::vector<TokenId>{1, 2, 0});
    CHECK(vocab.tokenize("who") == std::vector<TokenId>{1});
    CHECK(vocab.tokenize(" law\t who \n") == std::vector<TokenId>{3, 1});
}

TEST_CASE("tokenize rejects all-whitespace text") {
    Vocab vocab = fixture_vocab();
    CHECK_THROWS_WITH_AS(vocab.tokenize(""), "empty question", std::runtime_error);
    CHECK_THROWS_WITH_AS(vocab.tokenize("   \t "), "empty question", std::runtime_error);
}

TEST_CASE("tokenize is idempotent on lowercased single tokens") {
    Vocab vocab = fixture_vocab();
    for (const std::string& tok : vocab.tokens()) {
        if (tok == Vocab::kOovToken) continue;
        auto first = vocab.tokenize(tok);
        auto second = vocab.tokenize(tok);
        CHECK(first == second);
        CHECK(first.size() == 1);
    }
}

TEST_CASE("vocab build interns training tokens in first-appearance order") {
    Conversation conv;
    conv.id = "c";
    Turn t1;
    t1.question = "Who signed WHO";
    Turn t2;
    t2.question = "law who";
    conv.turns = {t1, t2};
    const std::vector<Conversation> convs = {conv};
    Vocab vocab = Vocab::build(convs);
    CHECK(vocab.size() == 4); // oov + who, signed, law
    CHECK(vocab.tokenize("who") == std::vector<TokenId>{1});
    CHECK(vocab.tokenize("signed") == std::vector<TokenId>{2});
    CHECK(vocab.tokenize("law") == std::vector<TokenId>{3});
}

TEST_CASE("encode_question of a single token is ffn(embedding)") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 4, 4);
    store.init_uniform(-0.5, 0.5, 11);
    Tape tape;
    const std::vector<TokenId> tokens = {2};
    ValueId hq = enc.encode_question(tape, store, tokens);

    Vector row(4);
    for (std::size_t k = 0; k < 4; ++k) row[k] = store.mat(enc.token_embeddings)(2, k);
    Vector expected = ffn(row, store, enc.pool);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(tape.value(hq)[k] == doctest::Approx(expected[k]).epsilon(1e-14));
    }
}

TEST_CASE("encode_question with zero params returns the pooling output bias") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 4, 3);
    store.vec(enc.pool.b2) = Vector{0.25, -0.5, 1.0};
    Tape tape;
    const std::vector<TokenId> tokens = {1, 2, 3};
    ValueId hq = enc.encode_question(tape, store, tokens);
    CHECK(tape.value(hq)[0] == 0.25);
    CHECK(tape.value(hq)[1] == -0.5);
    CHECK(tape.value(hq)[2] == 1.0);
}

TEST_CASE("encode_question rejects an empty token list") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 4, 3);
    Tape tape;
    CHECK_THROWS_WITH_AS(enc.encode_question(tape, store, {}), "empty question",
                         std::runtime_error);
}

TEST_CASE("encoder seeded golden fixtures") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 4, 4);
    store.init_uniform(-0.5, 0.5, 11);

    // Frozen from the long-double reference (mean pool + FFN, then the
    // history LSTM over two turns).
    const Vector expected_q{-0.21051022275688203, 0.36227561844563766, 0.44587480772518651,
                            -0.4119250256021974};
    const Vector expected_l1{-0.030959967283458071, -0.13361465985194632,
                             -0.040839611558981741, -0.035274261282606884};
    const Vector expected_l2{-0.059867149588048778, -0.18334250493962972,
                             -0.062854313637079398, -0.040721035772250967};

    Tape tape;
    const std::vector<TokenId> q1 = {1, 2};
    const std::vector<TokenId> q2 = {3, 0};
    ValueId h1 = enc.encode_question(tape, store, q1);
    ValueId h2 = enc.encode_question(tape, store, q2);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::fabs(tape.value(h1)[k] - expected_q[k]) <= 1e-9);
    }

    const std::vector<ValueId> one = {h1};
    ValueId l1 = enc.encode_history(tape, store, one);
    const std::vector<ValueId> two = {h1, h2};
    ValueId l2 = enc.encode_history(tape, store, two);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::fabs(tape.value(l1)[k] - expected_l1[k]) <= 1e-9);
        CHECK(std::fabs(tape.value(l2)[k] - expected_l2[k]) <= 1e-9);
    }
}

TEST_CASE("single-turn history equals one LSTM step from zero state") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 5, 3);
    store.init_uniform(-0.4, 0.4, 29);
    Tape tape;
    const std::vector<TokenId> q = {1, 4};
    ValueId hq = enc.encode_question(tape, store, q);
    const std::vector<ValueId> hqs = {hq};
    ValueId lq = enc.encode_history(tape, store, hqs);

    auto [h, c] = lstm_step(tape.value(hq), Vector(3), Vector(3), store, enc.history);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(tape.value(lq)[k] == doctest::Approx(h[k]).epsilon(1e-14));
    }
}

TEST_CASE("history prefixes match intermediate states") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 6, 4);
    store.init_uniform(-0.4, 0.4, 31);
    Tape tape;
    std::vector<ValueId> hqs;
    for (TokenId t = 1; t <= 4; ++t) {
        const std::vector<TokenId> q = {t};
        hqs.push_back(enc.encode_question(tape, store, q));
    }
    auto states = enc.encode_history_states(tape, store, hqs);
    for (std::size_t k = 1; k <= hqs.size(); ++k) {
        std::span<const ValueId> prefix(hqs.data(), k);
        ValueId lk = enc.encode_history(tape, store, prefix);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(tape.value(lk)[i] == doctest::Approx(tape.value(states[k - 1].h)[i])
                                            .epsilon(1e-14));
        }
    }
}

TEST_CASE("encode_history rejects an empty history") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 4, 3);
    Tape tape;
    CHECK_THROWS_WITH_AS(enc.encode_history(tape, store, {}), "empty history",
                         std::runtime_error);
}

TEST_CASE("encode_question is permutation invariant (mean pooling)") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 6, 4);
    store.init_uniform(-0.5, 0.5, 37);
    Tape tape;
    const std::vector<TokenId> a = {1, 3, 5, 2};
    const std::vector<TokenId> b = {5, 2, 1, 3};
    ValueId ha = enc.encode_question(tape, store, a);
    ValueId hb = enc.encode_question(tape, store, b);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(tape.value(ha)[k] == doctest::Approx(tape.value(hb)[k]).epsilon(1e-13));
    }
}

TEST_CASE("encode_history is order sensitive") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 6, 4);
    store.init_uniform(-0.5, 0.5, 41);
    Tape tape;
    const std::vector<TokenId> q1 = {1, 2};
    const std::vector<TokenId> q2 = {3, 4};
    ValueId h1 = enc.encode_question(tape, store, q1);
    ValueId h2 = enc.encode_question(tape, store, q2);
    const std::vector<ValueId> fwd = {h1, h2};
    const std::vector<ValueId> rev = {h2, h1};
    ValueId lf = enc.encode_history(tape, store, fwd);
    ValueId lr = enc.encode_history(tape, store, rev);
    double max_diff = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        max_diff = std::max(max_diff, std::fabs(tape.value(lf)[k] - tape.value(lr)[k]));
    }
    CHECK(max_diff > 1e-6);
}

TEST_CASE("encoder outputs are finite and d-dimensional") {
    ParamStore store;
    EncoderModel enc = EncoderModel::create(store, 8, 5);
    store.init_uniform(-0.5, 0.5, 43);
    Tape tape;
    const std::vector<TokenId> q = {1, 7, 0, 3};
    ValueId hq = enc.encode_question(tape, store, q);
    const std::vector<ValueId> hqs = {hq, hq};
    ValueId lq = enc.encode_history(tape, store, hqs);
    CHECK(tape.value(hq).size() == 5);
    CHECK(tape.value(lq).size() == 5);
    CHECK(tape.value(hq).all_finite());
    CHECK(tape.value(lq).all_finite());
}
