#pragma once

#include "kgcwalk/dataset.hpp"
#include "kgcwalk/layers.hpp"
#include "kgcwalk/tape.hpp"

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgcwalk {

using TokenId = std::uint32_t;

// Token table built from training conversations. Id 0 is reserved for
// out-of-vocabulary tokens.
class Vocab {
public:
    static constexpr std::string_view kOovToken = "<oov>";

    Vocab(); // just the OOV slot

    static Vocab build(std::span<const Conversation> conversations);
    // From a checkpoint's id-ordered token list (index 0 must be the OOV slot).
    static Vocab from_tokens(std::vector<std::string> tokens);

    // Lowercase, split on whitespace, map with OOV fallback. Throws
    // "empty question" when no tokens remain.
    std::vector<TokenId> tokenize(std::string_view text) const;

    std::size_t size() const { return tokens_.size(); } // includes the OOV slot
    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
};

std::vector<std::string> split_lowercase(std::string_view text);

// Question and conversation-history encoder: trainable token embeddings with
// mean pooling and a pooling FFN produce each turn's question embedding; an
// LSTM over the per-turn embeddings produces the query embedding for the
// latest turn.
struct EncoderModel {
    std::size_t dim = 0;
    ParamId token_embeddings; // |vocab| x d
    FfnParamIds pool;         // d -> d -> d
    LstmParamIds history;     // input d, hidden d

    static EncoderModel create(ParamStore& store, std::size_t vocab_size, std::size_t dim);

    // Mean-pooled token embeddings through the pooling FFN. Throws on an
    // empty token list.
    ValueId encode_question(Tape& tape, ParamStore& store,
                            std::span<const TokenId> tokens) const;

    // Runs the history LSTM over question embeddings for turns 1..t (zero
    // initial state) and returns the final hidden state.
    ValueId encode_history(Tape& tape, ParamStore& store,
                           std::span<const ValueId> question_embeddings) const;

    // Per-step hidden states of the same recurrence (back() is the final one).
    std::vector<History> encode_history_states(Tape& tape, ParamStore& store,
                                               std::span<const ValueId> question_embeddings) const;
};

} // namespace kgcwalk
