#include "kgcwalk/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

Model Model::create(const Graph& graph, Vocab vocab, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) {
        throw std::invalid_argument("embedding dimension must be >= 1");
    }
    Model m;
    m.dim = dim;
    m.vocab = std::move(vocab);
    m.encoder = EncoderModel::create(m.store, m.vocab.size(), dim);
    m.policy = PolicyModel::create(m.store, graph, dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    m.store.init_uniform(-bound, bound, seed);
    return m;
}

void Model::save(const std::filesystem::path& path) const {
    save_checkpoint(store, vocab.tokens(), path);
}

Model Model::load(const std::filesystem::path& path, const Graph& graph) {
    CheckpointData data = read_checkpoint(path);
    if (data.vocab_tokens.empty()) {
        throw std::runtime_error("checkpoint has no vocabulary section: " + path.string());
    }
    const CheckpointRecord* entities = data.find("policy.entity_embeddings");
    if (entities == nullptr || entities->dims.size() != 2) {
        throw std::runtime_error("checkpoint has no entity embedding table: " + path.string());
    }
    const std::size_t dim = entities->dims[1];
    if (entities->dims[0] != graph.entity_count()) {
        std::ostringstream msg;
        msg << "checkpoint/graph mismatch: checkpoint has " << entities->dims[0]
            << " entity rows, graph has " << graph.entity_count() << " entities";
        throw std::runtime_error(msg.str());
    }

    Model m;
    m.dim = dim;
    m.vocab = Vocab::from_tokens(data.vocab_tokens);
    m.encoder = EncoderModel::create(m.store, m.vocab.size(), dim);
    m.policy = PolicyModel::create(m.store, graph, dim);
    load_into(m.store, data);
    return m;
}

} // namespace kgcwalk
