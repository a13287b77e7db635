// Copyright 2026 The Newstrend Authors.
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

#ifndef NEWSTREND_TEXT_HPP_
#define NEWSTREND_TEXT_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newstrend::text {

// ASCII case-fold. Bytes outside ASCII pass through unchanged.
std::string lowercase(std::string_view s);

// Case-fold, collapse internal whitespace runs to one space and strip
// leading/trailing whitespace and ASCII punctuation.
std::string normalize(std::string_view s);

// True if the token consists only of ASCII punctuation.
bool is_punctuation(std::string_view token);

std::vector<std::string> split_whitespace(std::string_view s);

std::string join(std::span<const std::string> parts, std::string_view sep);

// Replaces spaces with underscores ("white house" -> "white_house").
std::string underscore(std::string_view s);

}  // namespace newstrend::text

#endif  // NEWSTREND_TEXT_HPP_
