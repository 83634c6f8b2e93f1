#include "scog/error.hpp"

namespace scog {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::UnknownSymbol: return "unknown-symbol";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::UntrainedModel: return "untrained-model";
    case ErrorKind::MalformedFile: return "malformed-file";
    case ErrorKind::VersionMismatch: return "version-mismatch";
    case ErrorKind::DataError: return "data-error";
    case ErrorKind::ConfigMismatch: return "config-mismatch";
    case ErrorKind::UndefinedAuc: return "undefined-auc";
    case ErrorKind::IncompleteMatrix: return "incomplete-matrix";
    case ErrorKind::IncompleteGroup: return "incomplete-group";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    }
    return "unknown";
}

static std::string describe_symbol(char symbol)
{
    if (symbol >= 0x20 && symbol < 0x7f)
        return std::string("'") + symbol + "'";
    return "byte " + std::to_string(static_cast<unsigned char>(symbol));
}

UnknownSymbol::UnknownSymbol(char symbol, std::size_t position)
    : Error(ErrorKind::UnknownSymbol,
            "unknown symbol " + describe_symbol(symbol) + " at position " + std::to_string(position)),
      symbol_(symbol), position_(position)
{
}

UnknownSymbol::UnknownSymbol(char symbol, std::size_t position, const std::string& context)
    : Error(ErrorKind::UnknownSymbol,
            context + ": unknown symbol " + describe_symbol(symbol) + " at position " +
                std::to_string(position)),
      symbol_(symbol), position_(position)
{
}

} // namespace scog
