#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace vsp {

// Root of every error the harness raises. Callers that only need a message
// catch this; tests catch the concrete types below.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- corpus -------------------------------------------------------------

class MissingColumn : public Error {
public:
    explicit MissingColumn(std::string column)
        : Error("missing CSV column: " + column), column_(std::move(column)) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class MalformedRow : public Error {
public:
    explicit MalformedRow(std::size_t line, const std::string& why = "malformed row")
        : Error(why + " at line " + std::to_string(line)), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyCode : public Error {
public:
    explicit EmptyCode(std::size_t row)
        : Error("empty code in row " + std::to_string(row)), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

class MissingManifestField : public Error {
public:
    MissingManifestField(std::string case_name, std::string field)
        : Error("manifest '" + case_name + "' is missing field '" + field + "'"),
          case_name_(std::move(case_name)), field_(std::move(field)) {}
    const std::string& case_name() const { return case_name_; }
    const std::string& field() const { return field_; }

private:
    std::string case_name_;
    std::string field_;
};

class InvalidManifestField : public Error {
public:
    InvalidManifestField(const std::string& case_name, const std::string& field,
                         const std::string& why)
        : Error("manifest '" + case_name + "' field '" + field + "': " + why) {}
};

class UnreadableSource : public Error {
public:
    UnreadableSource(std::string case_name, const std::string& path)
        : Error("case '" + case_name + "': cannot read " + path),
          case_name_(std::move(case_name)) {}
    const std::string& case_name() const { return case_name_; }

private:
    std::string case_name_;
};

class NotEnoughPairs : public Error {
public:
    NotEnoughPairs(std::size_t have, std::size_t want)
        : Error("requested " + std::to_string(want) + " pairs but only " +
                std::to_string(have) + " are available"),
          have_(have), want_(want) {}
    std::size_t have() const { return have_; }
    std::size_t want() const { return want_; }

private:
    std::size_t have_;
    std::size_t want_;
};

class CoverageGap : public Error {
public:
    CoverageGap(int cwe, std::string family)
        : Error("exemplar coverage gap for CWE-" + std::to_string(cwe) + " in family " + family),
          cwe_(cwe), family_(std::move(family)) {}
    int cwe() const { return cwe_; }
    const std::string& family() const { return family_; }

private:
    int cwe_;
    std::string family_;
};

class MalformedExemplar : public Error {
public:
    MalformedExemplar(std::string path, const std::string& why)
        : Error("malformed exemplar " + path + ": " + why), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// ---- prompting ----------------------------------------------------------

class LineNotInCode : public Error {
public:
    explicit LineNotInCode(const std::string& line)
        : Error("vulnerable line not found in code: " + line) {}
};

class StrategyTaskMismatch : public Error {
public:
    using Error::Error;
};

class MissingCwe : public Error {
public:
    explicit MissingCwe(const std::string& sample_id)
        : Error("sample '" + sample_id + "' has no CWE label") {}
};

class MissingVulnerableLine : public Error {
public:
    explicit MissingVulnerableLine(const std::string& sample_id)
        : Error("sample '" + sample_id + "' has no vulnerable line") {}
};

class MissingAnnotatedCode : public Error {
public:
    explicit MissingAnnotatedCode(const std::string& sample_id)
        : Error("sample '" + sample_id + "' has no comment-annotated code") {}
};

class InvalidOptions : public Error {
public:
    using Error::Error;
};

// ---- gateway ------------------------------------------------------------

class ContextOverflow : public Error {
public:
    ContextOverflow(std::size_t estimate, std::size_t limit)
        : Error("prompt needs " + std::to_string(estimate) + " tokens (with reply budget) but the model limit is " +
                std::to_string(limit)),
          estimate_(estimate), limit_(limit) {}
    std::size_t estimate() const { return estimate_; }
    std::size_t limit() const { return limit_; }

private:
    std::size_t estimate_;
    std::size_t limit_;
};

class HttpError : public Error {
public:
    HttpError(int status, std::string body_excerpt)
        : Error("HTTP error " + std::to_string(status) + ": " + body_excerpt),
          status_(status), body_(std::move(body_excerpt)) {}
    // 0 means the request never produced a response (transport failure).
    int status() const { return status_; }
    const std::string& body_excerpt() const { return body_; }

private:
    int status_;
    std::string body_;
};

class AuthMissing : public Error {
public:
    explicit AuthMissing(std::string env_var)
        : Error("API key environment variable is not set: " + env_var), env_var_(std::move(env_var)) {}
    const std::string& env_var() const { return env_var_; }

private:
    std::string env_var_;
};

class AmbiguousScript : public Error {
public:
    using Error::Error;
};

// ---- parsing ------------------------------------------------------------

class AnchorNotFound : public Error {
public:
    explicit AnchorNotFound(const std::string& anchor)
        : Error("edit anchor not found in code: " + anchor) {}
};

class AmbiguousAnchor : public Error {
public:
    AmbiguousAnchor(const std::string& anchor, std::size_t count)
        : Error("edit anchor occurs " + std::to_string(count) + " times: " + anchor), count_(count) {}
    std::size_t count() const { return count_; }

private:
    std::size_t count_;
};

// ---- metrics / analysis -------------------------------------------------

class UnknownClass : public Error {
public:
    explicit UnknownClass(int cwe) : Error("CWE-" + std::to_string(cwe) + " is not a scored class") {}
};

class PendingEntries : public Error {
public:
    explicit PendingEntries(std::size_t count)
        : Error(std::to_string(count) + " patch label(s) still pending"), count_(count) {}
    std::size_t count() const { return count_; }

private:
    std::size_t count_;
};

class EmptySlice : public Error {
public:
    using Error::Error;
};

class EmptyGroup : public Error {
public:
    explicit EmptyGroup(const std::string& group) : Error("group '" + group + "' has no samples") {}
};

class EmptyCampaign : public Error {
public:
    EmptyCampaign() : Error("campaign has no snippets") {}
};

// ---- cli ----------------------------------------------------------------

class RunNotFound : public Error {
public:
    explicit RunNotFound(const std::string& run) : Error("run not found: " + run) {}
};

class IncompleteRun : public Error {
public:
    explicit IncompleteRun(const std::string& run_id)
        : Error("run " + run_id + " has pending patch labels"), run_id_(run_id) {}
    const std::string& run_id() const { return run_id_; }

private:
    std::string run_id_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vsp
