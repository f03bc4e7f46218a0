#include "kgcwalk/encoder.hpp"

#include <cctype>
#include <stdexcept>

namespace kgcwalk {

Vocab::Vocab() {
    tokens_.emplace_back(kOovToken);
    ids_.emplace(std::string(kOovToken), 0);
}

std::vector<std::string> split_lowercase(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

Vocab Vocab::build(std::span<const Conversation> conversations) {
    Vocab vocab;
    for (const Conversation& conv : conversations) {
        for (const Turn& turn : conv.turns) {
            for (std::string& tok : split_lowercase(turn.question)) {
                if (!vocab.ids_.contains(tok)) {
                    const TokenId id = static_cast<TokenId>(vocab.tokens_.size());
                    vocab.ids_.emplace(tok, id);
                    vocab.tokens_.push_back(std::move(tok));
                }
            }
        }
    }
    return vocab;
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
    if (tokens.empty() || tokens.front() != kOovToken) {
        throw std::runtime_error("vocabulary token list must start with the OOV slot");
    }
    Vocab vocab;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const TokenId id = static_cast<TokenId>(vocab.tokens_.size());
        if (!vocab.ids_.emplace(tokens[i], id).second) {
            throw std::runtime_error("duplicate token in vocabulary: " + tokens[i]);
        }
        vocab.tokens_.push_back(std::move(tokens[i]));
    }
    return vocab;
}

std::vector<TokenId> Vocab::tokenize(std::string_view text) const {
    std::vector<TokenId> out;
    for (const std::string& tok : split_lowercase(text)) {
        auto it = ids_.find(tok);
        out.push_back(it == ids_.end() ? 0 : it->second);
    }
    if (out.empty()) {
        throw std::runtime_error("empty question");
    }
    return out;
}

EncoderModel EncoderModel::create(ParamStore& store, std::size_t vocab_size, std::size_t dim) {
    EncoderModel m;
    m.dim = dim;
    m.token_embeddings = store.add_matrix("encoder.token_embeddings", vocab_size, dim);
    m.pool = FfnParamIds::create(store, "encoder.pool", dim, dim, dim);
    m.history = LstmParamIds::create(store, "encoder.history", dim, dim);
    return m;
}

ValueId EncoderModel::encode_question(Tape& tape, ParamStore& store,
                                      std::span<const TokenId> tokens) const {
    if (tokens.empty()) {
        throw std::runtime_error("empty question");
    }
    std::vector<ValueId> rows;
    rows.reserve(tokens.size());
    for (TokenId t : tokens) {
        rows.push_back(tape.param_row(store, token_embeddings, t));
    }
    ValueId pooled = tape.mean(rows);
    return ffn_apply(tape, store, pool, pooled);
}

std::vector<History> EncoderModel::encode_history_states(
    Tape& tape, ParamStore& store, std::span<const ValueId> question_embeddings) const {
    if (question_embeddings.empty()) {
        throw std::runtime_error("empty history");
    }
    std::vector<History> states;
    states.reserve(question_embeddings.size());
    History state{tape.zeros(dim), tape.zeros(dim)};
    for (ValueId hq : question_embeddings) {
        state = lstm_step(tape, store, history, hq, state.h, state.c);
        states.push_back(state);
    }
    return states;
}

ValueId EncoderModel::encode_history(Tape& tape, ParamStore& store,
                                     std::span<const ValueId> question_embeddings) const {
    return encode_history_states(tape, store, question_embeddings).back().h;
}

} // namespace kgcwalk
