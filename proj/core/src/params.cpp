#include "kgcwalk/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace kgcwalk {

ParamId ParamStore::add(std::string name, std::variant<Vector, Matrix> value) {
    if (name.empty()) {
        throw std::invalid_argument("parameter name must be non-empty");
    }
    if (index_.contains(name)) {
        throw std::invalid_argument("duplicate parameter name: " + name);
    }
    std::variant<Vector, Matrix> grad;
    if (std::holds_alternative<Vector>(value)) {
        grad = Vector(std::get<Vector>(value).size());
    } else {
        const auto& m = std::get<Matrix>(value);
        grad = Matrix(m.rows(), m.cols());
    }
    const ParamId id = entries_.size();
    index_.emplace(name, id);
    entries_.push_back(Entry{std::move(name), std::move(value), std::move(grad)});
    return id;
}

ParamId ParamStore::add_vector(std::string name, std::size_t n) {
    return add(std::move(name), Vector(n));
}

ParamId ParamStore::add_matrix(std::string name, std::size_t rows, std::size_t cols) {
    return add(std::move(name), Matrix(rows, cols));
}

std::optional<ParamId> ParamStore::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool ParamStore::is_matrix(ParamId id) const {
    return std::holds_alternative<Matrix>(entries_.at(id).value);
}

Vector& ParamStore::vec(ParamId id) { return std::get<Vector>(entries_.at(id).value); }
const Vector& ParamStore::vec(ParamId id) const { return std::get<Vector>(entries_.at(id).value); }
Matrix& ParamStore::mat(ParamId id) { return std::get<Matrix>(entries_.at(id).value); }
const Matrix& ParamStore::mat(ParamId id) const { return std::get<Matrix>(entries_.at(id).value); }
Vector& ParamStore::vec_grad(ParamId id) { return std::get<Vector>(entries_.at(id).grad); }
Matrix& ParamStore::mat_grad(ParamId id) { return std::get<Matrix>(entries_.at(id).grad); }
const Matrix& ParamStore::mat_grad(ParamId id) const { return std::get<Matrix>(entries_.at(id).grad); }

std::span<double> ParamStore::values(ParamId id) {
    auto& e = entries_.at(id);
    return std::holds_alternative<Vector>(e.value) ? std::get<Vector>(e.value).span()
                                                   : std::get<Matrix>(e.value).span();
}

std::span<const double> ParamStore::values(ParamId id) const {
    const auto& e = entries_.at(id);
    return std::holds_alternative<Vector>(e.value) ? std::get<Vector>(e.value).span()
                                                   : std::get<Matrix>(e.value).span();
}

std::span<double> ParamStore::grads(ParamId id) {
    auto& e = entries_.at(id);
    return std::holds_alternative<Vector>(e.grad) ? std::get<Vector>(e.grad).span()
                                                  : std::get<Matrix>(e.grad).span();
}

std::span<const double> ParamStore::grads(ParamId id) const {
    const auto& e = entries_.at(id);
    return std::holds_alternative<Vector>(e.grad) ? std::get<Vector>(e.grad).span()
                                                  : std::get<Matrix>(e.grad).span();
}

std::vector<std::uint32_t> ParamStore::dims(ParamId id) const {
    const auto& e = entries_.at(id);
    if (std::holds_alternative<Vector>(e.value)) {
        return {static_cast<std::uint32_t>(std::get<Vector>(e.value).size())};
    }
    const auto& m = std::get<Matrix>(e.value);
    return {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
}

std::size_t ParamStore::element_count() const {
    std::size_t n = 0;
    for (ParamId id = 0; id < entries_.size(); ++id) {
        n += values(id).size();
    }
    return n;
}

void ParamStore::zero_grad() {
    for (ParamId id = 0; id < entries_.size(); ++id) {
        auto g = grads(id);
        std::fill(g.begin(), g.end(), 0.0);
    }
}

void ParamStore::init_uniform(double lo, double hi, std::uint64_t seed) {
    Rng rng(seed);
    for (ParamId id = 0; id < entries_.size(); ++id) {
        for (double& x : values(id)) {
            x = rng.uniform(lo, hi);
        }
    }
}

} // namespace kgcwalk
