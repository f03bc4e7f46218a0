#pragma once

#include "kgcwalk/checkpoint.hpp"
#include "kgcwalk/encoder.hpp"
#include "kgcwalk/policy.hpp"

#include <filesystem>

namespace kgcwalk {

// All trainable state for one graph + vocabulary: the parameter store plus
// the encoder and policy views into it.
struct Model {
    std::size_t dim = 0;
    Vocab vocab;
    EncoderModel encoder;
    PolicyModel policy;
    ParamStore store;

    // Registers all parameters (encoder first, then policy) and initializes
    // them uniformly in [-1/sqrt(dim), 1/sqrt(dim)] from the seed.
    static Model create(const Graph& graph, Vocab vocab, std::size_t dim, std::uint64_t seed);

    void save(const std::filesystem::path& path) const;

    // Rebuilds a model from a checkpoint, inferring the embedding dimension
    // from the stored tensors and validating every shape against the graph.
    static Model load(const std::filesystem::path& path, const Graph& graph);
};

} // namespace kgcwalk
