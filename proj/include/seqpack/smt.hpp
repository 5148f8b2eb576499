#pragma once

// Client for an external SMT solver process speaking SMT-LIB v2.6 over a pipe.

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "seqpack/encoder.hpp"
#include "seqpack/rat.hpp"

namespace seqpack {

/// Environment variable overriding the default solver command line.
inline constexpr const char* kSolverEnvVar = "SEQPACK_SOLVER";

/// Command resolution: explicit flag, then $SEQPACK_SOLVER, then "z3 -in".
/// Both the flag and the variable are split on whitespace.
std::vector<std::string> resolve_solver_command(const std::optional<std::string>& flag = std::nullopt);

/// Minimal s-expression: an atom or a list.
struct SExpr
{
    std::string atom;
    std::vector<SExpr> list;
    bool is_list = false;

    static SExpr parse(std::string_view text);
};

/// Exact value of a model literal: numeral, decimal, (/ a b), (- a).
/// Throws MalformedModelValue.
Rat parse_rational(const SExpr& expr);
Rat parse_rational(std::string_view text);

enum class SmtStatus { Sat, Unsat, Unknown, Timeout };

struct SmtResult
{
    SmtStatus status = SmtStatus::Unknown;
    /// Present iff status == Sat; covers every queried variable.
    std::optional<Assignment> model;
    std::string reason;
};

/// One solver child process with incremental push/pop scopes.
///
/// Declarations are global (they survive pops). Everything sent at depth 0
/// is appended to a replay log that reproduces the base solver state.
class SolverSession
{
public:
    /// Spawns the solver and performs the handshake. Throws SolverSpawnError
    /// or HandshakeError.
    static SolverSession open(const std::vector<std::string>& command);

    /// Opens a fresh session and feeds it a previously captured base log.
    static SolverSession replay(const std::vector<std::string>& command, const std::string& base_log);

    SolverSession(SolverSession&& other) noexcept;
    SolverSession& operator=(SolverSession&& other) noexcept;
    SolverSession(const SolverSession&) = delete;
    SolverSession& operator=(const SolverSession&) = delete;
    ~SolverSession();

    const std::string& version() const { return m_version; }
    std::size_t depth() const { return m_depth; }
    bool alive() const { return m_fd >= 0; }
    const std::string& base_log() const { return m_base_log; }

    void declare(const VarRef& var);

    /// Asserts at depth 0 only; throws std::logic_error inside a scope.
    void assert_base(const Formula& formula);
    void push();
    /// Asserts in the innermost scope; vanishes at the matching pop.
    void assert_scoped(const Formula& formula);
    /// Throws StackUnderflow at depth 0.
    void pop();

    /// check-sat with a per-call budget; on sat, get-value over `query`.
    SmtResult check(const std::vector<VarRef>& query, std::chrono::milliseconds budget);

    /// Sends raw text (used for replay); appended to the base log at depth 0.
    void send_raw(const std::string& text);

    void close();

private:
    SolverSession(int fd, pid_t pid);

    void send(const std::string& text);
    void assert_formula(const Formula& formula);
    /// Reads one complete response (atom line or balanced list).
    std::optional<std::string> read_response(std::chrono::steady_clock::time_point deadline);
    void kill_child();

    int m_fd = -1;
    pid_t m_pid = -1;
    std::string m_buffer;
    std::string m_version;
    std::string m_base_log;
    std::set<VarRef> m_declared;
    std::size_t m_depth = 0;
};

std::string to_string(SmtStatus status);

} // namespace seqpack
