// Copyright 2026 The causim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "causim/operators.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "causim/error.hpp"

namespace causim::ops {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cd(0, -1), cd(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

Matrix clock(Eigen::Index d) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "clock dimension < 1");
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        m(j, j) = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(d));
    }
    return m;
}

Matrix shift(Eigen::Index d) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "shift dimension < 1");
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) m((j + 1) % d, j) = 1.0;
    return m;
}

Matrix projector(char basis, Eigen::Index d, Eigen::Index k) {
    if (d < 1 || k < 0 || k >= d) {
        throw Error(ErrorCode::InvalidArgument, "projector index out of range");
    }
    Vector v = Vector::Zero(d);
    if (basis == 'z') {
        v(k) = 1.0;
    } else if (basis == 'x') {
        for (Eigen::Index j = 0; j < d; ++j) {
            v(j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                              2.0 * kPi * static_cast<double>(j * k) / static_cast<double>(d));
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, std::string("unknown basis '") + basis + "'");
    }
    return v * v.adjoint();
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

Matrix controlled_phase(double theta) {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = std::polar(1.0, theta);
    return m;
}

Matrix partial_cnot(double theta) {
    const Matrix h = kron(Matrix::Identity(2, 2), hadamard());
    return h * controlled_phase(theta) * h;
}

MeasurementFamily projective(char basis, Eigen::Index d) {
    std::vector<Matrix> kraus;
    for (Eigen::Index k = 0; k < d; ++k) kraus.push_back(projector(basis, d, k));
    return MeasurementFamily::make(std::move(kraus));
}

MeasurementFamily weak(char axis, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "weak strength must lie in [0, 1]");
    }
    Matrix sigma;
    if (axis == 'z') sigma = pauli_z();
    else if (axis == 'x') sigma = pauli_x();
    else throw Error(ErrorCode::InvalidArgument, std::string("unknown axis '") + axis + "'");
    const Matrix id = Matrix::Identity(2, 2);
    return MeasurementFamily::make({psd_sqrt((id + epsilon * sigma) / 2.0),
                                    psd_sqrt((id - epsilon * sigma) / 2.0)},
                                   {"+", "-"});
}

MeasurementFamily single_unitary(const Matrix &u) {
    return MeasurementFamily::make({Unitary::make(u).matrix()});
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    Matrix parse() {
        Matrix m = expr();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return m;
    }

  private:
    [[noreturn]] void fail(const std::string &msg) const {
        throw Error(ErrorCode::ParseError,
                    "at offset " + std::to_string(pos_) + " in '" + std::string(src_) +
                        "': " + msg);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    static bool is_scalar(const Matrix &m) { return m.rows() == 1 && m.cols() == 1; }

    Matrix combine(const Matrix &a, const Matrix &b, bool add) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) {
            fail("cannot add " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                 " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
        }
        return add ? Matrix(a + b) : Matrix(a - b);
    }

    Matrix multiply(const Matrix &a, const Matrix &b) {
        if (is_scalar(a)) return a(0, 0) * b;
        if (is_scalar(b)) return b(0, 0) * a;
        if (a.cols() != b.rows()) fail("matrix sizes do not match for product");
        return a * b;
    }

    Matrix expr() {
        Matrix lhs = term();
        for (;;) {
            if (accept('+')) lhs = combine(lhs, term(), true);
            else if (accept('-')) lhs = combine(lhs, term(), false);
            else return lhs;
        }
    }

    Matrix term() {
        Matrix lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = multiply(lhs, unary());
            } else if (accept('/')) {
                const Matrix rhs = unary();
                if (!is_scalar(rhs)) fail("division by a matrix");
                if (std::abs(rhs(0, 0)) == 0.0) fail("division by zero");
                lhs /= rhs(0, 0);
            } else {
                return lhs;
            }
        }
    }

    Matrix unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return primary();
    }

    static Matrix scalar(cd v) {
        Matrix m(1, 1);
        m(0, 0) = v;
        return m;
    }

    Matrix number() {
        const char *begin = src_.data() + pos_;
        char *end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        return scalar(v);
    }

    std::string identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(src_.substr(start, pos_ - start));
    }

    Matrix primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Matrix m = expr();
            expect(')');
            return m;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");
        const std::size_t at = pos_;
        const std::string name = identifier();
        if (name == "pi") return scalar(kPi);
        if (name == "i") return scalar(cd(0.0, 1.0));

        std::vector<Matrix> args;
        std::vector<std::string> words;
        if (accept('(')) {
            if (!accept(')')) {
                do {
                    skip_space();
                    // Bare basis letters are passed through as words.
                    const std::size_t save = pos_;
                    const std::string w = identifier();
                    skip_space();
                    if ((w == "z" || w == "x") && pos_ < src_.size() &&
                        (src_[pos_] == ',' || src_[pos_] == ')')) {
                        words.push_back(w);
                        args.push_back(Matrix());
                    } else {
                        pos_ = save;
                        args.push_back(expr());
                        words.emplace_back();
                    }
                } while (accept(','));
                expect(')');
            }
        }
        try {
            return call(name, args, words);
        } catch (const Error &e) {
            if (e.code() == ErrorCode::ParseError) throw;
            pos_ = at;
            fail(e.what());
        }
    }

    double real_arg(const std::vector<Matrix> &args, std::size_t i) {
        if (i >= args.size() || !is_scalar(args[i])) fail("expected a scalar argument");
        if (std::abs(args[i](0, 0).imag()) > 1e-12) fail("expected a real argument");
        return args[i](0, 0).real();
    }

    Eigen::Index int_arg(const std::vector<Matrix> &args, std::size_t i) {
        const double v = real_arg(args, i);
        if (std::abs(v - std::round(v)) > 1e-9) fail("expected an integer argument");
        return static_cast<Eigen::Index>(std::llround(v));
    }

    cd complex_arg(const std::vector<Matrix> &args, std::size_t i) {
        if (i >= args.size() || !is_scalar(args[i])) fail("expected a scalar argument");
        return args[i](0, 0);
    }

    void arity(const std::vector<Matrix> &args, std::size_t lo, std::size_t hi,
               const std::string &name) {
        if (args.size() < lo || args.size() > hi) {
            fail(name + " takes " + std::to_string(lo) +
                 (lo == hi ? "" : "-" + std::to_string(hi)) + " argument(s)");
        }
    }

    Matrix call(const std::string &name, const std::vector<Matrix> &args,
                const std::vector<std::string> &words) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (!words[i].empty() && !(name == "projector" && i == 0)) {
                fail("basis letter only allowed as the first argument of projector");
            }
        }
        if (name == "pauli_x") return arity(args, 0, 0, name), pauli_x();
        if (name == "pauli_y") return arity(args, 0, 0, name), pauli_y();
        if (name == "pauli_z") return arity(args, 0, 0, name), pauli_z();
        if (name == "hadamard") return arity(args, 0, 0, name), hadamard();
        if (name == "cnot") return arity(args, 0, 0, name), cnot();
        if (name == "clock") return arity(args, 1, 1, name), clock(int_arg(args, 0));
        if (name == "shift") return arity(args, 1, 1, name), shift(int_arg(args, 0));
        if (name == "identity") {
            arity(args, 1, 1, name);
            const auto d = int_arg(args, 0);
            if (d < 1) fail("identity dimension < 1");
            return Matrix::Identity(d, d);
        }
        if (name == "controlled_phase") {
            return arity(args, 1, 1, name), controlled_phase(real_arg(args, 0));
        }
        if (name == "partial_cnot") {
            return arity(args, 1, 1, name), partial_cnot(real_arg(args, 0));
        }
        if (name == "projector") {
            arity(args, 2, 3, name);
            if (words[0].empty()) fail("projector basis must be z or x");
            const Eigen::Index d = args.size() == 3 ? int_arg(args, 2) : 2;
            return projector(words[0][0], d, int_arg(args, 1));
        }
        if (name == "kron") {
            if (args.size() < 2) fail("kron takes at least two arguments");
            Matrix m = args[0];
            for (std::size_t i = 1; i < args.size(); ++i) m = kron(m, args[i]);
            return m;
        }
        if (name == "dagger") return arity(args, 1, 1, name), Matrix(args[0].adjoint());
        if (name == "sqrtm") {
            arity(args, 1, 1, name);
            if (args[0].rows() != args[0].cols()) fail("sqrtm needs a square matrix");
            return psd_sqrt(args[0]);
        }
        if (name == "sqrt") return arity(args, 1, 1, name), scalar(std::sqrt(complex_arg(args, 0)));
        if (name == "exp") return arity(args, 1, 1, name), scalar(std::exp(complex_arg(args, 0)));
        if (name == "cos") return arity(args, 1, 1, name), scalar(std::cos(complex_arg(args, 0)));
        if (name == "sin") return arity(args, 1, 1, name), scalar(std::sin(complex_arg(args, 0)));
        fail("unknown name '" + name + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

Matrix evaluate(std::string_view expression) { return Parser(expression).parse(); }

cd evaluate_scalar(std::string_view expression) {
    const Matrix m = evaluate(expression);
    if (m.rows() != 1 || m.cols() != 1) {
        throw Error(ErrorCode::ParseError, "expected a scalar in '" + std::string(expression) + "'");
    }
    return m(0, 0);
}

} // namespace causim::ops
