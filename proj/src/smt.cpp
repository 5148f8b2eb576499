#include "seqpack/smt.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "seqpack/errors.hpp"

extern char** environ;

namespace seqpack {

namespace {

constexpr std::chrono::milliseconds kHandshakeBudget{10000};
// Extra wall time granted past the solver's own timeout before the child is killed.
constexpr std::chrono::milliseconds kKillGrace{1500};

std::vector<std::string> split_words(const std::string& text)
{
    std::vector<std::string> words;
    std::istringstream is(text);
    for (std::string w; is >> w;)
        words.push_back(w);
    return words;
}

} // namespace

std::vector<std::string> resolve_solver_command(const std::optional<std::string>& flag)
{
    if (flag && !split_words(*flag).empty())
        return split_words(*flag);
    if (const char* env = std::getenv(kSolverEnvVar); env && !split_words(env).empty())
        return split_words(env);
    return {"z3", "-in"};
}

namespace {

class SExprReader
{
public:
    explicit SExprReader(std::string_view text) : m_text(text) {}

    SExpr read()
    {
        skip_space();
        if (m_pos >= m_text.size())
            throw MalformedModelValue("unexpected end of s-expression");
        if (m_text[m_pos] == '(') {
            ++m_pos;
            SExpr e;
            e.is_list = true;
            for (;;) {
                skip_space();
                if (m_pos >= m_text.size())
                    throw MalformedModelValue("unbalanced parentheses");
                if (m_text[m_pos] == ')') {
                    ++m_pos;
                    return e;
                }
                e.list.push_back(read());
            }
        }
        if (m_text[m_pos] == ')')
            throw MalformedModelValue("unexpected ')'");
        SExpr e;
        if (m_text[m_pos] == '"') {
            const std::size_t start = m_pos++;
            while (m_pos < m_text.size() && m_text[m_pos] != '"')
                ++m_pos;
            if (m_pos >= m_text.size())
                throw MalformedModelValue("unterminated string literal");
            ++m_pos;
            e.atom = std::string(m_text.substr(start, m_pos - start));
            return e;
        }
        const std::size_t start = m_pos;
        while (m_pos < m_text.size() && !std::isspace(static_cast<unsigned char>(m_text[m_pos])) &&
               m_text[m_pos] != '(' && m_text[m_pos] != ')')
            ++m_pos;
        e.atom = std::string(m_text.substr(start, m_pos - start));
        return e;
    }

    bool at_end()
    {
        skip_space();
        return m_pos >= m_text.size();
    }

private:
    void skip_space()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos])))
            ++m_pos;
    }

    std::string_view m_text;
    std::size_t m_pos = 0;
};

} // namespace

SExpr SExpr::parse(std::string_view text)
{
    SExprReader reader(text);
    SExpr e = reader.read();
    if (!reader.at_end())
        throw MalformedModelValue("trailing text after s-expression");
    return e;
}

Rat parse_rational(const SExpr& expr)
{
    if (!expr.is_list) {
        try {
            return Rat::parse(expr.atom);
        } catch (const std::invalid_argument&) {
            throw MalformedModelValue("not a numeric literal: '" + expr.atom + "'");
        }
    }
    const auto& l = expr.list;
    if (l.size() == 2 && !l[0].is_list && l[0].atom == "-")
        return -parse_rational(l[1]);
    if (l.size() == 3 && !l[0].is_list && l[0].atom == "/") {
        const Rat den = parse_rational(l[2]);
        if (den.is_zero())
            throw MalformedModelValue("division by zero in model value");
        return parse_rational(l[1]) / den;
    }
    if (l.size() == 3 && !l[0].is_list && l[0].atom == "-")
        return parse_rational(l[1]) - parse_rational(l[2]);
    throw MalformedModelValue("unsupported model value form");
}

Rat parse_rational(std::string_view text)
{
    return parse_rational(SExpr::parse(text));
}

std::string to_string(SmtStatus status)
{
    switch (status) {
    case SmtStatus::Sat:
        return "sat";
    case SmtStatus::Unsat:
        return "unsat";
    case SmtStatus::Unknown:
        return "unknown";
    case SmtStatus::Timeout:
        return "timeout";
    }
    return "?";
}

SolverSession::SolverSession(int fd, pid_t pid) : m_fd(fd), m_pid(pid) {}

SolverSession::SolverSession(SolverSession&& other) noexcept
    : m_fd(std::exchange(other.m_fd, -1)),
      m_pid(std::exchange(other.m_pid, -1)),
      m_buffer(std::move(other.m_buffer)),
      m_version(std::move(other.m_version)),
      m_base_log(std::move(other.m_base_log)),
      m_declared(std::move(other.m_declared)),
      m_depth(std::exchange(other.m_depth, 0))
{
}

SolverSession& SolverSession::operator=(SolverSession&& other) noexcept
{
    if (this != &other) {
        close();
        m_fd = std::exchange(other.m_fd, -1);
        m_pid = std::exchange(other.m_pid, -1);
        m_buffer = std::move(other.m_buffer);
        m_version = std::move(other.m_version);
        m_base_log = std::move(other.m_base_log);
        m_declared = std::move(other.m_declared);
        m_depth = std::exchange(other.m_depth, 0);
    }
    return *this;
}

SolverSession::~SolverSession()
{
    close();
}

namespace {

std::optional<VarRef> var_from_name(std::string_view name)
{
    if (name.size() < 2)
        return std::nullopt;
    VarKind kind;
    switch (name.front()) {
    case 'X': kind = VarKind::X; break;
    case 'Y': kind = VarKind::Y; break;
    case 'T': kind = VarKind::T; break;
    case 'p': kind = VarKind::TParam; break;
    case 'q': kind = VarKind::TPrimeParam; break;
    default: return std::nullopt;
    }
    std::uint32_t index = 0;
    const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
    if (ec != std::errc() || ptr != name.data() + name.size())
        return std::nullopt;
    return VarRef{kind, index};
}

} // namespace

SolverSession SolverSession::open(const std::vector<std::string>& command)
{
    if (command.empty())
        throw SolverSpawnError("empty solver command");

    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
        throw SolverSpawnError(std::string("socketpair failed: ") + std::strerror(errno));

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);

    std::vector<char*> argv;
    for (const std::string& a : command)
        argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(sv[1]);
    if (rc != 0) {
        ::close(sv[0]);
        throw SolverSpawnError("cannot start solver '" + command[0] + "': " + std::strerror(rc));
    }

    SolverSession session(sv[0], pid);
    try {
        session.send("(set-option :print-success false)\n"
                     "(set-option :global-declarations true)\n"
                     "(set-option :produce-models true)\n"
                     "(set-logic QF_LRA)\n"
                     "(get-info :version)\n");
        auto reply = session.read_response(std::chrono::steady_clock::now() + kHandshakeBudget);
        if (!reply)
            throw HandshakeError("solver did not answer the handshake in time");
        const SExpr e = SExpr::parse(*reply);
        if (!e.is_list || e.list.size() != 2 || e.list[0].atom != ":version")
            throw HandshakeError("unexpected handshake reply: " + *reply);
        std::string v = e.list[1].atom;
        if (v.size() >= 2 && v.front() == '"')
            v = v.substr(1, v.size() - 2);
        session.m_version = v;
    } catch (const HandshakeError&) {
        throw;
    } catch (const Error& e) {
        throw HandshakeError(std::string("solver handshake failed: ") + e.what());
    }
    return session;
}

SolverSession SolverSession::replay(const std::vector<std::string>& command, const std::string& base_log)
{
    SolverSession session = open(command);
    session.send_raw(base_log);
    return session;
}

void SolverSession::send(const std::string& text)
{
    if (m_fd < 0)
        throw SolverProtocolError("solver session is closed");
    std::size_t off = 0;
    while (off < text.size()) {
        const ssize_t n = ::send(m_fd, text.data() + off, text.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            kill_child();
            throw SolverProtocolError(std::string("write to solver failed: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

void SolverSession::send_raw(const std::string& text)
{
    send(text);
    if (m_depth == 0)
        m_base_log += text;
    // Keep the declared set in sync so later queries don't redeclare.
    static const std::string kDecl = "(declare-const ";
    for (std::size_t at = text.find(kDecl); at != std::string::npos; at = text.find(kDecl, at + 1)) {
        const std::size_t begin = at + kDecl.size();
        const std::size_t end = text.find(' ', begin);
        if (end == std::string::npos)
            break;
        if (auto var = var_from_name(std::string_view(text).substr(begin, end - begin)))
            m_declared.insert(*var);
    }
}

std::optional<std::string> SolverSession::read_response(std::chrono::steady_clock::time_point deadline)
{
    for (;;) {
        std::size_t start = 0;
        while (start < m_buffer.size() && std::isspace(static_cast<unsigned char>(m_buffer[start])))
            ++start;
        if (start < m_buffer.size()) {
            if (m_buffer[start] == '(') {
                int balance = 0;
                bool in_string = false;
                for (std::size_t i = start; i < m_buffer.size(); ++i) {
                    const char c = m_buffer[i];
                    if (in_string) {
                        in_string = c != '"';
                        continue;
                    }
                    if (c == '"')
                        in_string = true;
                    else if (c == '(')
                        ++balance;
                    else if (c == ')' && --balance == 0) {
                        std::string out = m_buffer.substr(start, i + 1 - start);
                        m_buffer.erase(0, i + 1);
                        return out;
                    }
                }
            } else if (auto nl = m_buffer.find('\n', start); nl != std::string::npos) {
                std::string out = m_buffer.substr(start, nl - start);
                m_buffer.erase(0, nl + 1);
                return out;
            }
        }

        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline)
            return std::nullopt;
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd{m_fd, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(wait + 1, 1 << 30)));
        if (rc < 0) {
            if (errno == EINTR)
                continue;
            throw SolverProtocolError(std::string("poll failed: ") + std::strerror(errno));
        }
        if (rc == 0)
            continue;
        char chunk[65536];
        const ssize_t n = ::read(m_fd, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN)
                continue;
            throw SolverProtocolError(std::string("read from solver failed: ") + std::strerror(errno));
        }
        if (n == 0) {
            kill_child();
            throw SolverProtocolError("solver process exited unexpectedly");
        }
        m_buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

void SolverSession::declare(const VarRef& var)
{
    if (m_declared.insert(var).second) {
        const std::string text = "(declare-const " + var.name() + " Real)\n";
        send(text);
        // Declarations are global, so they always belong to the replayable base state.
        m_base_log += text;
    }
}

void SolverSession::assert_formula(const Formula& formula)
{
    std::set<VarRef> vars;
    formula.collect_vars(vars);
    for (const VarRef& v : vars)
        declare(v);
    send_raw("(assert " + to_smtlib(formula) + ")\n");
}

void SolverSession::assert_base(const Formula& formula)
{
    if (m_depth != 0)
        throw std::logic_error("assert_base called inside an open scope");
    assert_formula(formula);
}

void SolverSession::push()
{
    send("(push 1)\n");
    ++m_depth;
}

void SolverSession::assert_scoped(const Formula& formula)
{
    assert_formula(formula);
}

void SolverSession::pop()
{
    if (m_depth == 0)
        throw StackUnderflow("pop at assertion level 0");
    send("(pop 1)\n");
    --m_depth;
}

SmtResult SolverSession::check(const std::vector<VarRef>& query, std::chrono::milliseconds budget)
{
    for (const VarRef& v : query)
        if (!m_declared.contains(v))
            declare(v);

    const long long ms = std::max<long long>(1, budget.count());
    send("(set-option :timeout " + std::to_string(ms) + ")\n(check-sat)\n");
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms) + kKillGrace;

    auto reply = read_response(deadline);
    if (!reply) {
        kill_child();
        return {SmtStatus::Timeout, std::nullopt, "killed after deadline"};
    }
    if (reply->rfind("(error", 0) == 0)
        throw SolverProtocolError("solver reported: " + *reply);

    if (*reply == "unsat")
        return {SmtStatus::Unsat, std::nullopt, ""};
    if (*reply == "unknown") {
        send("(get-info :reason-unknown)\n");
        auto why = read_response(std::chrono::steady_clock::now() + kHandshakeBudget);
        const std::string reason = why.value_or("");
        const bool timed_out = reason.find("timeout") != std::string::npos ||
                               reason.find("canceled") != std::string::npos ||
                               reason.find("resource") != std::string::npos;
        return {timed_out ? SmtStatus::Timeout : SmtStatus::Unknown, std::nullopt, reason};
    }
    if (*reply != "sat")
        throw SolverProtocolError("unexpected check-sat reply: " + *reply);

    SmtResult result{SmtStatus::Sat, Assignment{}, ""};
    if (query.empty())
        return result;

    std::string request = "(get-value (";
    std::unordered_map<std::string, VarRef> by_name;
    for (std::size_t i = 0; i < query.size(); ++i) {
        request += (i ? " " : "") + query[i].name();
        by_name.emplace(query[i].name(), query[i]);
    }
    request += "))\n";
    send(request);
    auto values = read_response(std::chrono::steady_clock::now() + kHandshakeBudget);
    if (!values)
        throw SolverProtocolError("solver did not return model values");
    if (values->rfind("(error", 0) == 0)
        throw SolverProtocolError("solver reported: " + *values);

    const SExpr e = SExpr::parse(*values);
    if (!e.is_list)
        throw SolverProtocolError("malformed get-value reply: " + *values);
    for (const SExpr& pair : e.list) {
        if (!pair.is_list || pair.list.size() != 2 || pair.list[0].is_list)
            throw SolverProtocolError("malformed get-value entry in: " + *values);
        auto it = by_name.find(pair.list[0].atom);
        if (it == by_name.end())
            throw SolverProtocolError("unrequested variable in model: " + pair.list[0].atom);
        (*result.model)[it->second] = parse_rational(pair.list[1]);
    }
    if (result.model->size() != by_name.size())
        throw SolverProtocolError("model is missing requested variables");
    return result;
}

void SolverSession::kill_child()
{
    if (m_pid > 0) {
        ::kill(m_pid, SIGKILL);
        ::waitpid(m_pid, nullptr, 0);
        m_pid = -1;
    }
    if (m_fd >= 0) {
        ::close(m_fd);
        m_fd = -1;
    }
}

void SolverSession::close()
{
    if (m_fd >= 0) {
        const char bye[] = "(exit)\n";
        [[maybe_unused]] auto n = ::send(m_fd, bye, sizeof bye - 1, MSG_NOSIGNAL);
        ::shutdown(m_fd, SHUT_WR);
    }
    if (m_pid > 0) {
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(m_pid, nullptr, WNOHANG) == m_pid) {
                m_pid = -1;
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
        }
    }
    kill_child();
}

} // namespace seqpack
