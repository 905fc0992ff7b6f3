#pragma once

// Minimal canonical JSON emitter. Keys keep insertion order, output is
// compact (no whitespace), doubles use 17 significant digits. Writing the
// same data always yields the same bytes, which is what makes model files
// diffable and the save/load/save cycle byte-stable.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "advfeat/csv.hpp"

namespace advfeat {

class JsonWriter {
public:
    const std::string& str() const { return out_; }

    JsonWriter& begin_object() {
        comma();
        out_ += '{';
        stack_.push_back(false);
        return *this;
    }
    JsonWriter& end_object() {
        out_ += '}';
        stack_.pop_back();
        mark_value();
        return *this;
    }
    JsonWriter& begin_array() {
        comma();
        out_ += '[';
        stack_.push_back(false);
        return *this;
    }
    JsonWriter& end_array() {
        out_ += ']';
        stack_.pop_back();
        mark_value();
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        comma();
        append_string(k);
        out_ += ':';
        pending_key_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        comma();
        // JSON has no literal for non-finite numbers; follow the usual
        // convention and emit null (only ROC sentinels ever hit this).
        out_ += std::isfinite(v) ? format_double(v) : "null";
        mark_value();
        return *this;
    }
    JsonWriter& value(std::int64_t v) {
        comma();
        out_ += std::to_string(v);
        mark_value();
        return *this;
    }
    JsonWriter& value(std::uint64_t v) {
        comma();
        out_ += std::to_string(v);
        mark_value();
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v) {
        comma();
        out_ += v ? "true" : "false";
        mark_value();
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        comma();
        append_string(v);
        mark_value();
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& null() {
        comma();
        out_ += "null";
        mark_value();
        return *this;
    }

private:
    void comma() {
        if (pending_key_) {
            pending_key_ = false;
            return;
        }
        if (!stack_.empty() && stack_.back()) out_ += ',';
    }
    void mark_value() {
        if (!stack_.empty()) stack_.back() = true;
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> stack_;  // per nesting level: wrote at least one entry
    bool pending_key_ = false;
};

}  // namespace advfeat
