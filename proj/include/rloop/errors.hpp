#pragma once

#include <stdexcept>
#include <string>

namespace rloop {

// Exit-code classes used by the CLI: 2 = validation, 3 = not well-defined,
// 4 = irreducible denominator, 5 = I/O.
enum class ErrorClass { Validation = 2, NotWellDefined = 3, Irreducible = 4, Io = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& w = "division by zero")
        : Error(ErrorClass::Validation, w) {}
};
struct NotPositiveReal : Error {
    explicit NotPositiveReal(const std::string& w = "square root argument is not a positive real")
        : Error(ErrorClass::Validation, w) {}
};
struct ZeroDenominator : Error {
    explicit ZeroDenominator(const std::string& w = "zero denominator")
        : Error(ErrorClass::Validation, w) {}
};
struct EvalAtPole : Error {
    explicit EvalAtPole(const std::string& w = "evaluation at a pole")
        : Error(ErrorClass::Validation, w) {}
};
struct BadWindow : Error {
    explicit BadWindow(const std::string& w = "bad expansion window")
        : Error(ErrorClass::Validation, w) {}
};
struct IrreducibleDenominator : Error {
    explicit IrreducibleDenominator(const std::string& w = "denominator factor has no root in the scalar tower")
        : Error(ErrorClass::Irreducible, w) {}
};
struct TowerObstruction : Error {
    explicit TowerObstruction(const std::string& w = "required square root cannot be adjoined")
        : Error(ErrorClass::Irreducible, w) {}
};
struct InvalidDecomposition : Error {
    explicit InvalidDecomposition(const std::string& w = "invalid subspace decomposition")
        : Error(ErrorClass::Validation, w) {}
};
struct NotNilpotent : Error {
    explicit NotNilpotent(const std::string& w = "matrix is not nilpotent of the required order")
        : Error(ErrorClass::Validation, w) {}
};
struct NotSkew : Error {
    explicit NotSkew(const std::string& w = "matrix is not skew for the form")
        : Error(ErrorClass::Validation, w) {}
};
struct NotRealMatrix : Error {
    explicit NotRealMatrix(const std::string& w = "matrix is not real")
        : Error(ErrorClass::Validation, w) {}
};
struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& w = "precondition violated")
        : Error(ErrorClass::Validation, w) {}
};
struct NotWellDefined : Error {
    int stage = 0;
    explicit NotWellDefined(const std::string& w = "construction is not well-defined", int st = 0)
        : Error(ErrorClass::NotWellDefined, w), stage(st) {}
};
struct AlphaZero : Error {
    explicit AlphaZero(const std::string& w = "alpha must be nonzero")
        : Error(ErrorClass::Validation, w) {}
};
struct NotNegative : Error {
    explicit NotNegative(const std::string& w = "loop is not normalized to Id at infinity")
        : Error(ErrorClass::Validation, w) {}
};
struct IdenticallySingular : Error {
    explicit IdenticallySingular(const std::string& w = "determinant vanishes identically")
        : Error(ErrorClass::Validation, w) {}
};
struct RealityViolated : Error {
    explicit RealityViolated(const std::string& w = "loop violates the requested reality condition")
        : Error(ErrorClass::Validation, w) {}
};
struct AlreadyIdentity : Error {
    explicit AlreadyIdentity(const std::string& w = "loop is already the identity")
        : Error(ErrorClass::Validation, w) {}
};
struct SZeroImpossible : Error {
    explicit SZeroImpossible(const std::string& w = "s = 0 with a nontrivial loop; input is corrupted")
        : Error(ErrorClass::Validation, w) {}
};
struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& w = "grid too coarse for the requested stencil")
        : Error(ErrorClass::Validation, w) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& w = "parse error")
        : Error(ErrorClass::Validation, w) {}
};
struct FactorizationStuck : Error {
    explicit FactorizationStuck(const std::string& w = "factorization made no progress")
        : Error(ErrorClass::Validation, w) {}
};

}  // namespace rloop
