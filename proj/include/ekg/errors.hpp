#pragma once

#include <stdexcept>
#include <string>

namespace ekg {

// Base class for everything thrown by the engine.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- graph store ----

class EmptyLabelsError : public Error {
public:
    EmptyLabelsError() : Error("node must carry at least one label") {}
};

class UniquenessViolation : public Error {
public:
    UniquenessViolation(std::string label, std::string key, std::string value)
        : Error("uniqueness violation on (" + label + "," + key + ") value '" + value + "'"),
          label(std::move(label)), key(std::move(key)), value(std::move(value)) {}
    std::string label, key, value;
};

class DanglingEndpoint : public Error {
public:
    explicit DanglingEndpoint(std::uint64_t ref)
        : Error("relationship endpoint #" + std::to_string(ref) + " does not exist") {}
};

class UnknownNode : public Error {
public:
    explicit UnknownNode(std::uint64_t ref)
        : Error("unknown node #" + std::to_string(ref)) {}
};

class UnknownRelationship : public Error {
public:
    explicit UnknownRelationship(std::uint64_t ref)
        : Error("unknown relationship #" + std::to_string(ref)) {}
};

class TypeMismatch : public Error {
public:
    explicit TypeMismatch(const std::string& msg) : Error("type mismatch: " + msg) {}
};

// ---- ingest ----

class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& column)
        : Error("required column missing: " + column), column(column) {}
    std::string column;
};

class UnparseableTimestamp : public Error {
public:
    UnparseableTimestamp(std::size_t rowIndex, const std::string& cell)
        : Error("row " + std::to_string(rowIndex) + ": unparseable timestamp '" + cell + "'"),
          rowIndex(rowIndex) {}
    std::size_t rowIndex;
};

class MalformedCsv : public Error {
public:
    MalformedCsv(std::size_t rowIndex, const std::string& what)
        : Error("row " + std::to_string(rowIndex) + ": malformed CSV: " + what),
          rowIndex(rowIndex) {}
    std::size_t rowIndex;
};

class NonEmptyGraph : public Error {
public:
    NonEmptyGraph() : Error("graph already contains Event nodes") {}
};

class UnknownColumn : public Error {
public:
    explicit UnknownColumn(const std::string& column)
        : Error("no event carries column '" + column + "'"), column(column) {}
    std::string column;
};

class UnknownEntityType : public Error {
public:
    explicit UnknownEntityType(const std::string& type)
        : Error("no entity of type '" + type + "'"), type(type) {}
    std::string type;
};

class UnknownEntity : public Error {
public:
    explicit UnknownEntity(const std::string& uid)
        : Error("no entity with uID '" + uid + "'"), uid(uid) {}
    std::string uid;
};

class UnknownClassType : public Error {
public:
    explicit UnknownClassType(const std::string& type)
        : Error("no class of type '" + type + "'"), type(type) {}
    std::string type;
};

class BrokenChain : public Error {
public:
    explicit BrokenChain(const std::string& msg) : Error("broken DF chain: " + msg) {}
};

// ---- config / IO ----

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io: " + msg) {}
};

class SnapshotError : public Error {
public:
    explicit SnapshotError(const std::string& msg) : Error("snapshot: " + msg) {}
};

class UnknownSelection : public Error {
public:
    explicit UnknownSelection(const std::string& msg) : Error("export selection: " + msg) {}
};

// ---- pipeline ----

// Carries the failing stage name so the CLI can report where the run stopped.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause)
        : Error(stage + ": " + cause), stage(std::move(stage)) {}
    std::string stage;
};

}  // namespace ekg
