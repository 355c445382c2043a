#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dblext/complexes.hpp"
#include "dblext/double_extensions.hpp"
#include "dblext/double_groupoid.hpp"
#include "dblext/extensions.hpp"
#include "dblext/groupoid.hpp"

namespace dblext {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// A cochain file: values on one nerve level of a groupoid, or on one
/// bidegree of the binerve of a double groupoid.
struct CochainFile {
    std::variant<FiniteGroupoid, DoubleGroupoid> space;
    int p = 0;
    std::optional<int> q;  // set for bidegree cochains
    std::vector<CircleValue> values;
};

/// A double extension whose ebar is either given or to be solved for.
struct DoubleExtensionFile {
    DoubleGroupoid d;
    CentralExtension ev;
    CentralExtension eh;
    std::optional<std::vector<CircleValue>> ebar;  // nullopt: "solve"
    std::int64_t modulus = 0;                      // 0: unspecified
};

/// A bundle gerbe given by phi : Y -> M and either an extension of Y^[2] or a
/// section encoding on the trivial bundle.
struct GerbeFile {
    Surjection surjection;
    std::optional<CentralExtension> extension;
    std::int64_t fiber_order = 0;
    std::optional<Cochain> encoding;
};

using InstanceValue =
    std::variant<FiniteGroupoid, DoubleGroupoid, CentralExtension, DoubleExtensionFile, CochainFile, GerbeFile>;

struct Instance {
    std::string kind;
    InstanceValue value;
    /// SHA-256 over every file read, in load order.
    std::string digest;
};

/// Loads a file and everything it references (relative paths resolve against
/// the referring file). Validation is not implied. Throws StructuralError
/// with file, line or field on malformed input.
Instance load_instance(const std::filesystem::path& path);
Instance load_instance_text(const std::string& text, const std::filesystem::path& base_dir = ".");

std::string kind_of(const InstanceValue& value);

// Canonical serialization -------------------------------------------------------------

Json to_json(const FiniteGroupoid& g);
Json to_json(const DoubleGroupoid& d);
/// Always the explicit total form, base and total inlined.
Json to_json(const CentralExtension& e);
Json to_json(const DoubleExtensionFile& f);
Json to_json(const CochainFile& c);
Json to_json(const GerbeFile& g);
Json to_json(const InstanceValue& value);

/// Parses a JSON value (with "kind") whose references resolve against base_dir.
InstanceValue from_json(const Json& j, const std::filesystem::path& base_dir = ".");

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

/// Values keyed by the tuple rendering ("x|y", "a|b;c|d").
Json cochain_values_json(const std::vector<std::string>& keys, const std::vector<CircleValue>& values);

}  // namespace dblext
