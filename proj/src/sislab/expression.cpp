/*
 * Copyright (C) 2026 The sislab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "sislab/expression.hpp"
#include "sislab/error.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace sislab
{

struct Expression::Node {
    enum class Kind
    {
        Number,
        Variable,
        Negate,
        Add,
        Sub,
        Mul,
        Div,
        Pow,
        Sin,
        Cos,
        Abs,
        Exp,
        Sqrt,
        Min,
        Max,
    };

    Kind kind;
    double value = 0.0;
    std::size_t position = 0;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace
{

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind    = Expression::Node::Kind;

NodePtr make_node(Kind kind, std::size_t pos, std::vector<NodePtr> args = {}, double value = 0.0)
{
    auto node      = std::make_shared<Expression::Node>();
    node->kind     = kind;
    node->position = pos;
    node->args     = std::move(args);
    node->value    = value;
    return node;
}

class Parser
{
public:
    explicit Parser(std::string_view text)
        : m_text(text)
    {
    }

    NodePtr parse()
    {
        auto root = parse_sum();
        skip_space();
        if (m_pos != m_text.size()) {
            fail("unexpected character '" + std::string(1, m_text[m_pos]) + "'");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError("expression parse error at position " + std::to_string(m_pos) + ": " + what, m_pos);
    }

    void skip_space()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) {
            ++m_pos;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    NodePtr parse_sum()
    {
        auto lhs = parse_product();
        for (;;) {
            skip_space();
            auto pos = m_pos;
            if (accept('+')) {
                lhs = make_node(Kind::Add, pos, {lhs, parse_product()});
            }
            else if (accept('-')) {
                lhs = make_node(Kind::Sub, pos, {lhs, parse_product()});
            }
            else {
                return lhs;
            }
        }
    }

    NodePtr parse_product()
    {
        auto lhs = parse_unary();
        for (;;) {
            skip_space();
            auto pos = m_pos;
            if (accept('*')) {
                lhs = make_node(Kind::Mul, pos, {lhs, parse_unary()});
            }
            else if (accept('/')) {
                lhs = make_node(Kind::Div, pos, {lhs, parse_unary()});
            }
            else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary()
    {
        skip_space();
        auto pos = m_pos;
        if (accept('-')) {
            return make_node(Kind::Negate, pos, {parse_unary()});
        }
        return parse_power();
    }

    // -a^b parses as -(a^b); the exponent may itself carry a unary minus.
    NodePtr parse_power()
    {
        auto base = parse_primary();
        skip_space();
        auto pos = m_pos;
        if (accept('^')) {
            return make_node(Kind::Pow, pos, {base, parse_unary()});
        }
        return base;
    }

    NodePtr parse_primary()
    {
        skip_space();
        if (m_pos >= m_text.size()) {
            fail("unexpected end of expression");
        }
        const auto pos = m_pos;
        const char c   = m_text[m_pos];
        if (c == '(') {
            ++m_pos;
            auto inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = m_pos;
            while (end < m_text.size() && std::isalnum(static_cast<unsigned char>(m_text[end]))) {
                ++end;
            }
            const std::string name(m_text.substr(m_pos, end - m_pos));
            m_pos = end;
            if (name == "x") {
                return make_node(Kind::Variable, pos);
            }
            if (name == "pi") {
                return make_node(Kind::Number, pos, {}, std::numbers::pi);
            }
            Kind kind;
            int arity = 1;
            if (name == "sin") {
                kind = Kind::Sin;
            }
            else if (name == "cos") {
                kind = Kind::Cos;
            }
            else if (name == "abs") {
                kind = Kind::Abs;
            }
            else if (name == "exp") {
                kind = Kind::Exp;
            }
            else if (name == "sqrt") {
                kind = Kind::Sqrt;
            }
            else if (name == "min") {
                kind  = Kind::Min;
                arity = 2;
            }
            else if (name == "max") {
                kind  = Kind::Max;
                arity = 2;
            }
            else {
                m_pos = pos;
                fail("unknown symbol '" + name + "'");
            }
            expect('(');
            std::vector<NodePtr> args{parse_sum()};
            if (arity == 2) {
                expect(',');
                args.push_back(parse_sum());
            }
            expect(')');
            return make_node(kind, pos, std::move(args));
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr parse_number()
    {
        const auto pos   = m_pos;
        const char* first = m_text.data() + m_pos;
        const char* last  = m_text.data() + m_text.size();
        double value      = 0.0;
        auto [ptr, ec]    = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr == first) {
            fail("malformed number");
        }
        m_pos += static_cast<std::size_t>(ptr - first);
        return make_node(Kind::Number, pos, {}, value);
    }

    std::string_view m_text;
    std::size_t m_pos = 0;
};

double eval(const Expression::Node& node, double x)
{
    auto arg = [&](std::size_t i) {
        return eval(*node.args[i], x);
    };
    switch (node.kind) {
    case Kind::Number:
        return node.value;
    case Kind::Variable:
        return x;
    case Kind::Negate:
        return -arg(0);
    case Kind::Add:
        return arg(0) + arg(1);
    case Kind::Sub:
        return arg(0) - arg(1);
    case Kind::Mul:
        return arg(0) * arg(1);
    case Kind::Div: {
        const double den = arg(1);
        if (den == 0.0) {
            throw Error(ErrorCode::Domain, "division by zero at x = " + std::to_string(x) + " (operator at position " +
                                               std::to_string(node.position) + ")");
        }
        return arg(0) / den;
    }
    case Kind::Pow:
        return std::pow(arg(0), arg(1));
    case Kind::Sin:
        return std::sin(arg(0));
    case Kind::Cos:
        return std::cos(arg(0));
    case Kind::Abs:
        return std::abs(arg(0));
    case Kind::Exp:
        return std::exp(arg(0));
    case Kind::Sqrt:
        return std::sqrt(arg(0));
    case Kind::Min:
        return std::min(arg(0), arg(1));
    case Kind::Max:
        return std::max(arg(0), arg(1));
    }
    return 0.0;
}

} // namespace

Expression Expression::parse(std::string_view text)
{
    Expression e;
    e.m_text = std::string(text);
    e.m_root = Parser(text).parse();
    return e;
}

double Expression::evaluate(double x) const
{
    const double v = eval(*m_root, x);
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::Domain, "expression '" + m_text + "' is not finite at x = " + std::to_string(x));
    }
    return v;
}

} // namespace sislab
