#include "kgcwalk/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

bool Vector::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

Vector softmax(const Vector& scores) {
    if (scores.empty()) {
        throw std::invalid_argument("empty action score vector");
    }
    const double max_score = *std::max_element(scores.begin(), scores.end());
    Vector out(scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - max_score);
        sum += out[i];
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] /= sum;
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        std::ostringstream msg;
        msg << "dot: size mismatch (" << a.size() << ") vs (" << b.size() << ")";
        throw std::invalid_argument(msg.str());
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

Vector matvec(const Matrix& w, const Vector& x) {
    if (w.cols() != x.size()) {
        std::ostringstream msg;
        msg << "matvec: shape mismatch (" << w.rows() << "x" << w.cols() << ") vs ("
            << x.size() << ")";
        throw std::invalid_argument(msg.str());
    }
    Vector y(w.rows());
    for (std::size_t r = 0; r < w.rows(); ++r) {
        y[r] = dot(w.row(r), x.span());
    }
    return y;
}

} // namespace kgcwalk
