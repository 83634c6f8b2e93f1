#pragma once

#include <stdexcept>
#include <string>

namespace scog {

enum class ErrorKind {
    InvalidInput,
    UnknownSymbol,
    Capacity,
    UntrainedModel,
    MalformedFile,
    VersionMismatch,
    DataError,
    ConfigMismatch,
    UndefinedAuc,
    IncompleteMatrix,
    IncompleteGroup,
    InvalidSpec,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

class UnknownSymbol : public Error {
public:
    UnknownSymbol(char symbol, std::size_t position);
    UnknownSymbol(char symbol, std::size_t position, const std::string& context);

    char symbol() const noexcept { return symbol_; }
    std::size_t position() const noexcept { return position_; }

private:
    char symbol_;
    std::size_t position_;
};

class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

class UntrainedModel : public Error {
public:
    UntrainedModel() : Error(ErrorKind::UntrainedModel, "model has no representations") {}
};

class MalformedFile : public Error {
public:
    explicit MalformedFile(const std::string& what) : Error(ErrorKind::MalformedFile, what) {}
};

class VersionMismatch : public Error {
public:
    explicit VersionMismatch(const std::string& what) : Error(ErrorKind::VersionMismatch, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::DataError, what) {}
};

class ConfigMismatch : public Error {
public:
    explicit ConfigMismatch(const std::string& what) : Error(ErrorKind::ConfigMismatch, what) {}
};

class UndefinedAuc : public Error {
public:
    explicit UndefinedAuc(const std::string& what) : Error(ErrorKind::UndefinedAuc, what) {}
};

class IncompleteMatrix : public Error {
public:
    explicit IncompleteMatrix(const std::string& what) : Error(ErrorKind::IncompleteMatrix, what) {}
};

class IncompleteGroup : public Error {
public:
    explicit IncompleteGroup(const std::string& what) : Error(ErrorKind::IncompleteGroup, what) {}
};

class InvalidSpec : public Error {
public:
    explicit InvalidSpec(const std::string& what) : Error(ErrorKind::InvalidSpec, what) {}
};

} // namespace scog
