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

#include "limitlens/record.hpp"

#include "limitlens/error.hpp"

namespace limitlens {

std::string_view to_string(DeviceClass device) noexcept {
    switch (device) {
        case DeviceClass::web:
            return "web";
        case DeviceClass::mobile:
            return "mobile";
        case DeviceClass::excluded:
            break;
    }
    return "excluded";
}

DeviceClass parse_device(std::string_view name) {
    if (name == "web") {
        return DeviceClass::web;
    }
    if (name == "mobile") {
        return DeviceClass::mobile;
    }
    throw ConfigError("unknown device class '" + std::string(name) + "' (expected web or mobile)");
}

}  // namespace limitlens
