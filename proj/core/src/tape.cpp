#include "kgcwalk/tape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

ValueId Tape::push(Vector value, std::function<void(Tape&)> back) {
    nodes_.push_back(Node{std::move(value), Vector{}, std::move(back)});
    return static_cast<ValueId>(nodes_.size() - 1);
}

const Vector& Tape::value(ValueId id) const {
    if (id >= nodes_.size()) {
        throw std::out_of_range("value id not on tape");
    }
    return nodes_[id].value;
}

void Tape::check_same_size(ValueId a, ValueId b, const char* op) const {
    if (val(a).size() != val(b).size()) {
        std::ostringstream msg;
        msg << op << ": shape mismatch (" << val(a).size() << ") vs (" << val(b).size() << ")";
        throw std::invalid_argument(msg.str());
    }
}

ValueId Tape::input(Vector v) {
    return push(std::move(v), nullptr);
}

ValueId Tape::zeros(std::size_t n) {
    return push(Vector(n), nullptr);
}

ValueId Tape::param_vec(ParamStore& store, ParamId id) {
    Vector v(store.vec(id).size());
    std::copy(store.vec(id).begin(), store.vec(id).end(), v.begin());
    ValueId out = push(std::move(v), nullptr);
    nodes_[out].back = [&store, id, out](Tape& t) {
        auto g = store.grads(id);
        const Vector& go = t.grad(out);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
    };
    return out;
}

ValueId Tape::param_row(ParamStore& store, ParamId id, std::size_t row) {
    const Matrix& m = store.mat(id);
    if (row >= m.rows()) {
        std::ostringstream msg;
        msg << "param_row: row " << row << " out of range for " << store.name(id) << " ("
            << m.rows() << "x" << m.cols() << ")";
        throw std::out_of_range(msg.str());
    }
    Vector v(m.cols());
    auto r = m.row(row);
    std::copy(r.begin(), r.end(), v.begin());
    ValueId out = push(std::move(v), nullptr);
    nodes_[out].back = [&store, id, row, out](Tape& t) {
        auto g = store.mat_grad(id).row(row);
        const Vector& go = t.grad(out);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
    };
    return out;
}

ValueId Tape::linear(ParamStore& store, ParamId w, ValueId x) {
    const Matrix& m = store.mat(w);
    Vector y = matvec(m, val(x));
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [&store, w, x, out](Tape& t) {
        const Matrix& wm = store.mat(w);
        Matrix& wg = store.mat_grad(w);
        const Vector& xv = t.val(x);
        const Vector& go = t.grad(out);
        Vector& gx = t.grad(x);
        for (std::size_t r = 0; r < wm.rows(); ++r) {
            const double gr = go[r];
            auto wrow = wm.row(r);
            auto grow = wg.row(r);
            for (std::size_t c = 0; c < wm.cols(); ++c) {
                grow[c] += gr * xv[c];
                gx[c] += gr * wrow[c];
            }
        }
    };
    return out;
}

ValueId Tape::add(ValueId a, ValueId b) {
    check_same_size(a, b, "add");
    Vector y(val(a).size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = val(a)[i] + val(b)[i];
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [a, b, out](Tape& t) {
        const Vector& go = t.grad(out);
        Vector& ga = t.grad(a);
        Vector& gb = t.grad(b);
        for (std::size_t i = 0; i < go.size(); ++i) {
            ga[i] += go[i];
            gb[i] += go[i];
        }
    };
    return out;
}

ValueId Tape::mul(ValueId a, ValueId b) {
    check_same_size(a, b, "mul");
    Vector y(val(a).size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = val(a)[i] * val(b)[i];
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [a, b, out](Tape& t) {
        const Vector& go = t.grad(out);
        const Vector& av = t.val(a);
        const Vector& bv = t.val(b);
        Vector& ga = t.grad(a);
        Vector& gb = t.grad(b);
        for (std::size_t i = 0; i < go.size(); ++i) {
            ga[i] += go[i] * bv[i];
            gb[i] += go[i] * av[i];
        }
    };
    return out;
}

ValueId Tape::scale(ValueId a, double c) {
    Vector y(val(a).size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = c * val(a)[i];
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [a, c, out](Tape& t) {
        const Vector& go = t.grad(out);
        Vector& ga = t.grad(a);
        for (std::size_t i = 0; i < go.size(); ++i) ga[i] += c * go[i];
    };
    return out;
}

ValueId Tape::axpby(double a, ValueId x, double b, ValueId y) {
    check_same_size(x, y, "axpby");
    Vector v(val(x).size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * val(x)[i] + b * val(y)[i];
    ValueId out = push(std::move(v), nullptr);
    nodes_[out].back = [a, x, b, y, out](Tape& t) {
        const Vector& go = t.grad(out);
        Vector& gx = t.grad(x);
        Vector& gy = t.grad(y);
        for (std::size_t i = 0; i < go.size(); ++i) {
            gx[i] += a * go[i];
            gy[i] += b * go[i];
        }
    };
    return out;
}

ValueId Tape::concat(std::span<const ValueId> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("concat: no parts");
    }
    std::size_t n = 0;
    for (ValueId p : parts) n += val(p).size();
    Vector y(n);
    std::size_t off = 0;
    for (ValueId p : parts) {
        const Vector& pv = val(p);
        std::copy(pv.begin(), pv.end(), y.begin() + static_cast<std::ptrdiff_t>(off));
        off += pv.size();
    }
    std::vector<ValueId> ids(parts.begin(), parts.end());
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [ids, out](Tape& t) {
        const Vector& go = t.grad(out);
        std::size_t off2 = 0;
        for (ValueId p : ids) {
            Vector& gp = t.grad(p);
            for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += go[off2 + i];
            off2 += gp.size();
        }
    };
    return out;
}

ValueId Tape::mean(std::span<const ValueId> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("mean: no parts");
    }
    const std::size_t n = val(parts.front()).size();
    for (ValueId p : parts) check_same_size(parts.front(), p, "mean");
    Vector y(n);
    for (ValueId p : parts) {
        for (std::size_t i = 0; i < n; ++i) y[i] += val(p)[i];
    }
    const double inv = 1.0 / static_cast<double>(parts.size());
    for (std::size_t i = 0; i < n; ++i) y[i] *= inv;
    std::vector<ValueId> ids(parts.begin(), parts.end());
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [ids, inv, out](Tape& t) {
        const Vector& go = t.grad(out);
        for (ValueId p : ids) {
            Vector& gp = t.grad(p);
            for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += inv * go[i];
        }
    };
    return out;
}

ValueId Tape::sum(std::span<const ValueId> scalars) {
    if (scalars.empty()) {
        throw std::invalid_argument("sum: no terms");
    }
    double s = 0.0;
    for (ValueId p : scalars) {
        if (val(p).size() != 1) {
            throw std::invalid_argument("sum: all terms must be scalars");
        }
        s += val(p)[0];
    }
    std::vector<ValueId> ids(scalars.begin(), scalars.end());
    ValueId out = push(Vector{s}, nullptr);
    nodes_[out].back = [ids, out](Tape& t) {
        const double go = t.grad(out)[0];
        for (ValueId p : ids) t.grad(p)[0] += go;
    };
    return out;
}

ValueId Tape::sigmoid(ValueId a) {
    Vector y(val(a).size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-val(a)[i]));
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [a, out](Tape& t) {
        const Vector& yv = t.val(out);
        const Vector& go = t.grad(out);
        Vector& ga = t.grad(a);
        for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * yv[i] * (1.0 - yv[i]);
    };
    return out;
}

ValueId Tape::tanh(ValueId a) {
    Vector y(val(a).size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(val(a)[i]);
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [a, out](Tape& t) {
        const Vector& yv = t.val(out);
        const Vector& go = t.grad(out);
        Vector& ga = t.grad(a);
        for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * (1.0 - yv[i] * yv[i]);
    };
    return out;
}

ValueId Tape::relu(ValueId a) {
    Vector y(val(a).size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = val(a)[i] > 0.0 ? val(a)[i] : 0.0;
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [a, out](Tape& t) {
        const Vector& av = t.val(a);
        const Vector& go = t.grad(out);
        Vector& ga = t.grad(a);
        for (std::size_t i = 0; i < go.size(); ++i) {
            if (av[i] > 0.0) ga[i] += go[i];
        }
    };
    return out;
}

ValueId Tape::softmax(ValueId scores) {
    Vector p = kgcwalk::softmax(val(scores));
    ValueId out = push(std::move(p), nullptr);
    nodes_[out].back = [scores, out](Tape& t) {
        const Vector& pv = t.val(out);
        const Vector& go = t.grad(out);
        Vector& gs = t.grad(scores);
        double dot_gp = 0.0;
        for (std::size_t i = 0; i < pv.size(); ++i) dot_gp += go[i] * pv[i];
        for (std::size_t i = 0; i < pv.size(); ++i) gs[i] += pv[i] * (go[i] - dot_gp);
    };
    return out;
}

ValueId Tape::dot(ValueId a, ValueId b) {
    check_same_size(a, b, "dot");
    ValueId out = push(Vector{kgcwalk::dot(val(a).span(), val(b).span())}, nullptr);
    nodes_[out].back = [a, b, out](Tape& t) {
        const double go = t.grad(out)[0];
        const Vector& av = t.val(a);
        const Vector& bv = t.val(b);
        Vector& ga = t.grad(a);
        Vector& gb = t.grad(b);
        for (std::size_t i = 0; i < av.size(); ++i) {
            ga[i] += go * bv[i];
            gb[i] += go * av[i];
        }
    };
    return out;
}

ValueId Tape::dot_each(std::span<const ValueId> rows, ValueId f) {
    if (rows.empty()) {
        throw std::invalid_argument("dot_each: no rows");
    }
    Vector y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        check_same_size(rows[i], f, "dot_each");
        y[i] = kgcwalk::dot(val(rows[i]).span(), val(f).span());
    }
    std::vector<ValueId> ids(rows.begin(), rows.end());
    ValueId out = push(std::move(y), nullptr);
    nodes_[out].back = [ids, f, out](Tape& t) {
        const Vector& go = t.grad(out);
        const Vector& fv = t.val(f);
        Vector& gf = t.grad(f);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const Vector& rv = t.val(ids[i]);
            Vector& gr = t.grad(ids[i]);
            for (std::size_t k = 0; k < fv.size(); ++k) {
                gr[k] += go[i] * fv[k];
                gf[k] += go[i] * rv[k];
            }
        }
    };
    return out;
}

ValueId Tape::pick(ValueId v, std::size_t i) {
    if (i >= val(v).size()) {
        throw std::out_of_range("pick: index out of range");
    }
    ValueId out = push(Vector{val(v)[i]}, nullptr);
    nodes_[out].back = [v, i, out](Tape& t) { t.grad(v)[i] += t.grad(out)[0]; };
    return out;
}

namespace {

double logsumexp(const Vector& z) {
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double x : z) s += std::exp(x - m);
    return m + std::log(s);
}

} // namespace

ValueId Tape::log_softmax_pick(ValueId scores, std::size_t i) {
    const Vector& z = val(scores);
    if (z.empty()) {
        throw std::invalid_argument("empty action score vector");
    }
    if (i >= z.size()) {
        throw std::out_of_range("log_softmax_pick: index out of range");
    }
    const double lse = logsumexp(z);
    ValueId out = push(Vector{z[i] - lse}, nullptr);
    nodes_[out].back = [scores, i, out](Tape& t) {
        const double go = t.grad(out)[0];
        Vector p = kgcwalk::softmax(t.val(scores));
        Vector& gs = t.grad(scores);
        for (std::size_t k = 0; k < p.size(); ++k) {
            gs[k] += go * ((k == i ? 1.0 : 0.0) - p[k]);
        }
    };
    return out;
}

ValueId Tape::softmax_entropy(ValueId scores) {
    const Vector& z = val(scores);
    if (z.empty()) {
        throw std::invalid_argument("empty action score vector");
    }
    const double lse = logsumexp(z);
    Vector p = kgcwalk::softmax(z);
    double mean_z = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) mean_z += p[k] * z[k];
    const double h = lse - mean_z;
    ValueId out = push(Vector{h}, nullptr);
    nodes_[out].back = [scores, h, out](Tape& t) {
        const double go = t.grad(out)[0];
        const Vector& zv = t.val(scores);
        Vector p2 = kgcwalk::softmax(zv);
        const double lse2 = logsumexp(zv);
        Vector& gs = t.grad(scores);
        for (std::size_t k = 0; k < p2.size(); ++k) {
            const double logp = zv[k] - lse2;
            gs[k] += go * (-p2[k] * (logp + h));
        }
    };
    return out;
}

void Tape::truncate(std::size_t mark) {
    if (mark > nodes_.size()) {
        throw std::out_of_range("truncate: mark past end of tape");
    }
    nodes_.resize(mark);
}

std::size_t Tape::backward(ValueId loss) {
    if (loss >= nodes_.size()) {
        throw std::invalid_argument("backward: loss not on tape");
    }
    if (nodes_[loss].value.size() != 1) {
        throw std::invalid_argument("backward: loss must be a scalar");
    }
    for (Node& n : nodes_) {
        n.grad = Vector(n.value.size());
    }
    nodes_[loss].grad[0] = 1.0;
    std::size_t visited = 0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        if (nodes_[i].back) {
            nodes_[i].back(*this);
            ++visited;
        }
    }
    return visited;
}

} // namespace kgcwalk
