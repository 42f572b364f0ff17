#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

// Random Java compilation units and random edits to them.
namespace coevo::testing {

struct GenStatement {
    enum class Kind { Simple, If, For } kind = Kind::Simple;
    std::string text;  // Simple: full statement; If/For: condition / loop header
    std::vector<GenStatement> body;
    std::optional<std::vector<GenStatement>> else_body;
};

struct GenParameter {
    std::string type;
    std::string name;
};

struct GenMethod {
    std::vector<std::string> modifiers;
    bool test_annotation = false;
    std::string return_type = "void";
    std::string name;
    std::vector<GenParameter> parameters;
    std::vector<GenStatement> body;
};

struct GenField {
    std::string type;
    std::string name;
    std::string init;
};

struct GenClass {
    std::string name;
    std::vector<GenField> fields;
    std::vector<GenMethod> methods;
    std::vector<GenClass> inner;
};

struct GenUnit {
    std::vector<GenClass> classes;
};

class JavaGenerator {
public:
    explicit JavaGenerator(std::uint64_t seed) : rng_(seed) {}

    GenUnit unit();
    GenClass klass(int depth);
    GenMethod method();
    // Applies between 1 and `max_edits` random edits.
    GenUnit mutate(GenUnit unit, int max_edits = 4);

    // Returns a fresh identifier with the given prefix.
    std::string fresh(const std::string& prefix);

private:
    std::vector<GenStatement> block(int depth);
    GenStatement statement(int depth);
    std::string expression();
    void edit(GenUnit& unit);

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    std::mt19937_64 rng_;
    int counter_ = 0;
};

std::string render(const GenUnit& unit);

}  // namespace coevo::testing
