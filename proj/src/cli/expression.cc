// Copyright 2026 The mend-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mend/cli/expression.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "mend/errors.h"

namespace mend::cli {

namespace {

class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    double parse() {
        double value = sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        if (!std::isfinite(value)) {
            fail("value is not finite");
        }
        return value;
    }

  private:
    double sum() {
        double value = product();
        for (;;) {
            if (accept('+')) {
                value += product();
            } else if (accept('-')) {
                value -= product();
            } else {
                return value;
            }
        }
    }

    double product() {
        double value = unary();
        for (;;) {
            if (accept('*')) {
                value *= unary();
            } else if (accept('/')) {
                double divisor = unary();
                if (divisor == 0.0) {
                    fail("division by zero");
                }
                value /= divisor;
            } else {
                return value;
            }
        }
    }

    double unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return primary();
    }

    double primary() {
        skip_space();
        if (accept('(')) {
            double value = sum();
            expect(')');
            return value;
        }
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            std::string name = text_.substr(start, pos_ - start);
            if (name == "pi") {
                return std::numbers::pi;
            }
            if (name == "sqrt") {
                expect('(');
                double value = sum();
                expect(')');
                if (value < 0.0) {
                    fail("sqrt of a negative number");
                }
                return std::sqrt(value);
            }
            fail("unknown name '" + name + "'");
        }
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) {
            fail("expected a number");
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("cannot parse '" + text_ + "': " + what);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

double parse_expression(const std::string& text) { return Parser(text).parse(); }

}  // namespace mend::cli
