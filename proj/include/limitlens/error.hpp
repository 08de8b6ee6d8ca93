/*
    Copyright (c) 2026 The limitlens Authors

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace limitlens {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid UTF-8; offset is the byte index of the offending sequence.
class DecodeError : public Error {
public:
    DecodeError(std::size_t offset, const std::string& detail)
        : Error("invalid UTF-8 at byte offset " + std::to_string(offset) + ": " + detail),
          offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class MalformedRecord : public Error {
public:
    using Error::Error;
};

// Histograms of different max_len combined.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A quantity is undefined for the given input (e.g. density of an empty histogram).
class UndefinedValue : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DesignError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace limitlens
