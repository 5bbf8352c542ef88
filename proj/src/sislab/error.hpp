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
#ifndef SISLAB_ERROR_HPP
#define SISLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sislab
{

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode
{
    InvalidArgument = 1,
    Parse           = 2,
    Domain          = 3,
    NoConvergence   = 4,
    Io              = 5,
    StepRejected    = 6,
    Internal        = 7,
};

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message)
        , m_code(code)
    {
    }

    ErrorCode code() const noexcept
    {
        return m_code;
    }

private:
    ErrorCode m_code;
};

/// Parse failure carrying the 0-based character (or 1-based line) position.
class ParseError : public Error
{
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(ErrorCode::Parse, message)
        , m_position(position)
    {
    }

    std::size_t position() const noexcept
    {
        return m_position;
    }

private:
    std::size_t m_position;
};

inline void require(bool condition, const std::string& message, ErrorCode code = ErrorCode::InvalidArgument)
{
    if (!condition) {
        throw Error(code, message);
    }
}

} // namespace sislab

#endif // SISLAB_ERROR_HPP
