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
#ifndef SISLAB_EXPRESSION_HPP
#define SISLAB_EXPRESSION_HPP

#include <memory>
#include <string>
#include <string_view>

namespace sislab
{

/**
 * Closed-form coefficient expression in the variable x.
 *
 * Grammar: real literals, the symbols `x` and `pi`, binary `+ - * / ^`
 * (`^` binds tightest and is right-associative), unary `-`, the functions
 * `sin cos abs exp sqrt` (one argument) and `min max` (two arguments), and
 * parentheses. Whitespace is ignored.
 */
class Expression
{
public:
    struct Node;

    /// Throws ParseError with the offending character position.
    static Expression parse(std::string_view text);

    /// Throws Error(Domain) on division by zero or a non-finite result.
    double evaluate(double x) const;

    const std::string& text() const
    {
        return m_text;
    }

private:
    std::string m_text;
    std::shared_ptr<const Node> m_root;
};

} // namespace sislab

#endif // SISLAB_EXPRESSION_HPP
