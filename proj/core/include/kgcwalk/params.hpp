#pragma once

#include "kgcwalk/numeric.hpp"
#include "kgcwalk/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace kgcwalk {

using ParamId = std::size_t;

// Named trainable tensors plus a same-shaped gradient accumulator for each.
// Ordering is the registration order and is stable; checkpoints are written
// in this order. Reads may be concurrent, but writes (gradient accumulation,
// optimizer steps) require a single writer.
class ParamStore {
public:
    ParamId add_vector(std::string name, std::size_t n);
    ParamId add_matrix(std::string name, std::size_t rows, std::size_t cols);

    std::size_t count() const { return entries_.size(); }
    const std::string& name(ParamId id) const { return entries_.at(id).name; }
    std::optional<ParamId> find(std::string_view name) const;

    bool is_matrix(ParamId id) const;
    Vector& vec(ParamId id);
    const Vector& vec(ParamId id) const;
    Matrix& mat(ParamId id);
    const Matrix& mat(ParamId id) const;
    Vector& vec_grad(ParamId id);
    Matrix& mat_grad(ParamId id);
    const Matrix& mat_grad(ParamId id) const;

    // Flat element views regardless of tensor kind (matrices row-major).
    std::span<double> values(ParamId id);
    std::span<const double> values(ParamId id) const;
    std::span<double> grads(ParamId id);
    std::span<const double> grads(ParamId id) const;

    // Dims as written to a checkpoint: {n} for vectors, {rows, cols} for matrices.
    std::vector<std::uint32_t> dims(ParamId id) const;

    std::size_t element_count() const;

    // Resets every gradient accumulator to exactly 0.
    void zero_grad();

    // Fills every parameter with uniform draws from [lo, hi), in registration
    // order, from a stream derived from `seed`.
    void init_uniform(double lo, double hi, std::uint64_t seed);

private:
    struct Entry {
        std::string name;
        std::variant<Vector, Matrix> value;
        std::variant<Vector, Matrix> grad;
    };

    ParamId add(std::string name, std::variant<Vector, Matrix> value);

    std::vector<Entry> entries_;
    std::unordered_map<std::string, ParamId> index_;
};

} // namespace kgcwalk
