#pragma once

#include "kgcwalk/numeric.hpp"
#include "kgcwalk/params.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace kgcwalk {

using ValueId = std::uint32_t;
inline constexpr ValueId kNoValue = std::numeric_limits<ValueId>::max();

// Recurrent hidden/cell pair threaded through LSTM steps on a tape.
struct History {
    ValueId h = kNoValue;
    ValueId c = kNoValue;
};

// Reverse-mode computation record. Every forward primitive appends one node
// holding its value and a backward closure; backward() replays the closures
// once each, in reverse creation order, and scatters parameter gradients
// into the owning ParamStore's accumulators.
//
// A tape reads parameter values both while recording and during backward, so
// the store must stay alive and unmodified in between. Tapes are not
// thread-safe; parallel rollouts each own a private tape and merge gradients
// by running their backward passes under a single writer.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Leaf holding a constant input; no gradient flows out of it.
    ValueId input(Vector v);
    ValueId zeros(std::size_t n);

    // Leaves bound to parameters: gradients accumulate into the store.
    ValueId param_vec(ParamStore& store, ParamId id);
    ValueId param_row(ParamStore& store, ParamId id, std::size_t row);

    // y = W x for a matrix parameter W.
    ValueId linear(ParamStore& store, ParamId w, ValueId x);

    ValueId add(ValueId a, ValueId b);
    ValueId mul(ValueId a, ValueId b);
    ValueId scale(ValueId a, double c);
    // a*x + b*y elementwise.
    ValueId axpby(double a, ValueId x, double b, ValueId y);
    ValueId concat(std::span<const ValueId> parts);
    ValueId mean(std::span<const ValueId> parts);
    ValueId sum(std::span<const ValueId> scalars);

    ValueId sigmoid(ValueId a);
    ValueId tanh(ValueId a);
    ValueId relu(ValueId a);

    ValueId softmax(ValueId scores);
    ValueId dot(ValueId a, ValueId b);
    // scores[i] = rows[i] . f — one node for a whole score vector.
    ValueId dot_each(std::span<const ValueId> rows, ValueId f);
    ValueId pick(ValueId v, std::size_t i);

    // log softmax(scores)[i], computed from raw scores via logsumexp.
    ValueId log_softmax_pick(ValueId scores, std::size_t i);
    // Entropy of softmax(scores).
    ValueId softmax_entropy(ValueId scores);

    const Vector& value(ValueId id) const;
    std::size_t size() const { return nodes_.size(); }

    // Rolls the tape back to `mark` nodes, dropping newer ones. Ids at or
    // past the mark become invalid. Used by exhaustive path enumeration to
    // keep memory proportional to the search depth.
    std::size_t mark() const { return nodes_.size(); }
    void truncate(std::size_t mark);

    // Seeds d(loss)/d(loss) = 1 and replays all recorded ops backward.
    // `loss` must be a scalar (size-1) node on this tape. Node gradients are
    // reset first, so repeated calls see only their own seeding; parameter
    // accumulators are NOT reset and keep summing across calls and tapes.
    // Returns the number of ops visited.
    std::size_t backward(ValueId loss);

private:
    struct Node {
        Vector value;
        Vector grad;
        std::function<void(Tape&)> back;
    };

    ValueId push(Vector value, std::function<void(Tape&)> back);
    Node& at(ValueId id) { return nodes_[id]; }
    const Vector& val(ValueId id) const { return nodes_[id].value; }
    Vector& grad(ValueId id) { return nodes_[id].grad; }
    void check_same_size(ValueId a, ValueId b, const char* op) const;

    std::vector<Node> nodes_;
};

} // namespace kgcwalk
