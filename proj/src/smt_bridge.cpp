/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/smt_bridge.hpp"

#include <array>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

namespace ffgmc {

  std::string_view to_string(SmtQuery q) {
    return q == SmtQuery::NoAccountableSafety ? "no-accountable-safety"
                                              : "finalized-nongenesis";
  }

  SmtQuery parse_smt_query(std::string_view text) {
    if (text == "no-accountable-safety") {
      return SmtQuery::NoAccountableSafety;
    }
    if (text == "finalized-nongenesis") {
      return SmtQuery::FinalizedNonGenesis;
    }
    throw InputError(fmt::format(
        "unknown query '{}' (expected no-accountable-safety or "
        "finalized-nongenesis)",
        text));
  }

  std::string_view to_string(SolverResult::Status s) {
    switch (s) {
      case SolverResult::Status::Sat:
        return "sat";
      case SolverResult::Status::Unsat:
        return "unsat";
      case SolverResult::Status::Unknown:
        return "unknown";
      case SolverResult::Status::SolverAbsent:
        return "solver-absent";
    }
    return "?";
  }

  namespace {

    constexpr std::array<std::string_view, kMaxSmtNodes> kNodeNames = {
        "Alice", "Bob",  "Charlie", "David",  "Eve",   "Frank",
        "Grace", "Heidi", "Ivan",   "Judy",   "Mallory", "Niaj",
        "Olivia", "Peggy", "Rupert", "Sybil"};

    class Emitter {
     public:
      Emitter(const Bounds &bounds,
              SmtQuery query,
              const RuleSet &rules,
              const SmtOptions &options)
          : b_(bounds),
            query_(query),
            rules_(rules),
            opt_(options),
            h_(bounds.n_blocks + 1),
            k_(options.n_checkpoints),
            n_(bounds.n_validators) {}

      std::string run() {
        header();
        blocks();
        checkpoints();
        votes();
        justification();
        finalization();
        slashing();
        goal();
        return std::move(out_);
      }

     private:
      template <typename... Args>
      void line(fmt::format_string<Args...> f, Args &&...args) {
        fmt::format_to(std::back_inserter(out_), f, std::forward<Args>(args)...);
        out_.push_back('\n');
      }

      static std::string hash(std::size_t i) {
        return fmt::format("Hash{}", i + 1);
      }
      static std::string chk(std::size_t i) {
        return fmt::format("C{}", i + 1);
      }
      static std::string_view node(std::size_t i) {
        return kNodeNames[i];
      }

      std::string quorum(const std::string &card) const {
        return rules_.quorum == Quorum::TwoThirds
            ? fmt::format("(>= (* 3 {}) (* 2 N))", card)
            : fmt::format("(>= (* 2 {}) N)", card);
      }

      /// Right-nested binary application, `unit` for an empty list.
      static std::string fold(std::string_view op,
                              const std::vector<std::string> &terms,
                              std::string_view unit) {
        if (terms.empty()) {
          return std::string(unit);
        }
        std::string acc = terms.back();
        for (auto i = terms.size() - 1; i-- > 0;) {
          acc = fmt::format("({} {} {})", op, terms[i], acc);
        }
        return acc;
      }

      std::string node_set(const std::string &predicate) const {
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < n_; ++i) {
          parts.push_back(fmt::format(
              "(ite ({} {}) (set.singleton {}) (as set.empty (Set Node)))",
              predicate,
              node(i),
              node(i)));
        }
        return fold("set.union", parts, "(as set.empty (Set Node))");
      }

      void datatype(std::string_view name,
                    std::size_t count,
                    const std::function<std::string(std::size_t)> &ctor) {
        std::string body;
        for (std::size_t i = 0; i < count; ++i) {
          body += fmt::format("{}({})", i ? " " : "", ctor(i));
        }
        line("(declare-datatype {} ({}))", name, body);
      }

      void header() {
        line("; ffgmc: FFG accountable safety, {} hashes, {} checkpoints, "
             "{} nodes",
             h_,
             k_,
             n_);
        line("; slot rule {}, quorum {}, E1 {}, E2 {}, justification "
             "ancestry {}",
             to_string(b_.slot_rule),
             rules_.quorum == Quorum::TwoThirds ? "2/3" : "1/2",
             rules_.double_vote_slashing ? "on" : "off",
             rules_.surround_vote_slashing ? "on" : "off",
             rules_.justification_ancestry ? "on" : "off");
        line("(set-logic ALL)");
        line("(set-option :produce-models true)");
        datatype("Hash", h_, [](std::size_t i) { return hash(i); });
        datatype("Checkpoint", k_, [](std::size_t i) { return chk(i); });
        datatype("Node", n_, [](std::size_t i) { return std::string(node(i)); });
        line("(declare-datatype Vote ((Vote (source Checkpoint) (target "
             "Checkpoint) (sender Node))))");
        line("(define-fun N () Int {})", n_);
      }

      void blocks() {
        line("(define-fun genesis () Hash Hash1)");
        line("(declare-fun parent_of (Hash) Hash)");
        line("(declare-fun slot (Hash) Int)");
        line("; genesis' slot is 0");
        line("(assert (= (slot genesis) 0))");
        line("; slots are increasing from parent to child");
        line("(assert (forall ((h Hash)) (=> (not (= h genesis)) (> (slot h) "
             "(slot (parent_of h))))))");
        if (opt_.bound_slots) {
          for (std::size_t i = 1; i < h_; ++i) {
            if (b_.slot_mode == SlotMode::Depth) {
              line("(assert (= (slot {0}) (+ (slot (parent_of {0})) 1)))",
                   hash(i));
            } else {
              line("(assert (<= (slot {}) {}))",
                   hash(i),
                   b_.effective_max_slot());
            }
          }
        }
        // Parent chains have at most h_-1 steps before reaching genesis.
        line("(define-fun anc0 ((a Hash) (d Hash)) Bool (= a d))");
        for (std::size_t k = 1; k < h_; ++k) {
          line("(define-fun anc{} ((a Hash) (d Hash)) Bool (or (= a d) (and "
               "(not (= d genesis)) (anc{} a (parent_of d)))))",
               k,
               k - 1);
        }
        line("(define-fun ancestor_descendant ((a Hash) (d Hash)) Bool (anc{} "
             "a d))",
             h_ - 1);
        line("(define-fun conflicting ((a Hash) (b Hash)) Bool (and (not "
             "(ancestor_descendant a b)) (not (ancestor_descendant b a))))");
      }

      void checkpoints() {
        line("(declare-fun checkpoint_block (Checkpoint) Hash)");
        line("(declare-fun checkpoint_slot (Checkpoint) Int)");
        line("(define-fun genesis_checkpoint () Checkpoint C1)");
        line("(assert (= (checkpoint_block C1) genesis))");
        line("(assert (= (checkpoint_slot C1) 0))");
        const char *cmp = b_.slot_rule == SlotRule::Strict ? ">" : ">=";
        for (std::size_t i = 1; i < k_; ++i) {
          line("(assert ({0} (checkpoint_slot {1}) (slot (checkpoint_block "
               "{1}))))",
               cmp,
               chk(i));
          if (opt_.bound_slots) {
            line("(assert (<= (checkpoint_slot {}) {}))",
                 chk(i),
                 b_.max_chkp_slot);
          }
        }
        line("; distinct atoms are distinct checkpoints");
        for (std::size_t i = 0; i < k_; ++i) {
          for (std::size_t j = i + 1; j < k_; ++j) {
            line("(assert (not (and (= (checkpoint_block {0}) "
                 "(checkpoint_block {1})) (= (checkpoint_slot {0}) "
                 "(checkpoint_slot {1})))))",
                 chk(i),
                 chk(j));
          }
        }
        line("(define-fun chk_le ((x Checkpoint) (y Checkpoint)) Bool (or (< "
             "(checkpoint_slot x) (checkpoint_slot y)) (and (= "
             "(checkpoint_slot x) (checkpoint_slot y)) (<= (slot "
             "(checkpoint_block x)) (slot (checkpoint_block y))))))");
        line("(define-fun chk_lt ((x Checkpoint) (y Checkpoint)) Bool (and "
             "(chk_le x y) (not (= x y))))");
      }

      void votes() {
        line("(define-fun valid_ffg ((s Checkpoint) (t Checkpoint)) Bool (and "
             "(< (checkpoint_slot s) (checkpoint_slot t)) "
             "(ancestor_descendant (checkpoint_block s) (checkpoint_block "
             "t))))");
        line("(declare-const votes (Set Vote))");
        line("; only valid votes are cast");
        for (std::size_t s = 0; s < k_; ++s) {
          for (std::size_t t = 0; t < k_; ++t) {
            for (std::size_t v = 0; v < n_; ++v) {
              line("(assert (=> (set.member (Vote {0} {1} {2}) votes) "
                   "(valid_ffg {0} {1})))",
                   chk(s),
                   chk(t),
                   node(v));
            }
          }
        }
        if (opt_.cap_votes) {
          line("(assert (<= (set.card votes) {}))", b_.max_votes);
        }
      }

      void justification() {
        line("(declare-const justified_checkpoints (Set Checkpoint))");
        // L6-L8 for one vote (s, t) and a candidate c.
        std::string body =
            "(and (set.member s justified_checkpoints) (= (checkpoint_slot t) "
            "(checkpoint_slot c))";
        if (rules_.justification_ancestry) {
          body +=
              " (ancestor_descendant (checkpoint_block s) (checkpoint_block "
              "c)) (ancestor_descendant (checkpoint_block c) "
              "(checkpoint_block t))";
        }
        body += ")";
        line("(define-fun justifying ((s Checkpoint) (t Checkpoint) (c "
             "Checkpoint)) Bool {})",
             body);
        std::vector<std::string> any;
        for (std::size_t s = 0; s < k_; ++s) {
          for (std::size_t t = 0; t < k_; ++t) {
            any.push_back(fmt::format(
                "(and (set.member (Vote {0} {1} n) votes) (justifying {0} {1} "
                "c))",
                chk(s),
                chk(t)));
          }
        }
        line("(define-fun justifies ((c Checkpoint) (n Node)) Bool {})",
             fold("or", any, "false"));
        line("; L3: genesis is justified; L4: a quorum votes from a justified "
             "checkpoint to c");
        for (std::size_t c = 0; c < k_; ++c) {
          const auto signers = node_set(fmt::format("justifies {}", chk(c)));
          line("(assert (= (set.member {0} justified_checkpoints) (or (= {0} "
               "genesis_checkpoint) {1})))",
               chk(c),
               quorum(fmt::format("(set.card {})", signers)));
        }
      }

      void finalization() {
        line("(declare-const finalized_checkpoints (Set Checkpoint))");
        std::vector<std::string> any;
        for (std::size_t t = 0; t < k_; ++t) {
          any.push_back(fmt::format(
              "(and (set.member (Vote c {0} n) votes) (= (checkpoint_slot {0}) "
              "(+ (checkpoint_slot c) 1)))",
              chk(t)));
        }
        line("(define-fun finalizes ((c Checkpoint) (n Node)) Bool {})",
             fold("or", any, "false"));
        for (std::size_t c = 0; c < k_; ++c) {
          const auto signers = node_set(fmt::format("finalizes {}", chk(c)));
          line("(assert (= (set.member {0} finalized_checkpoints) (or (= {0} "
               "genesis_checkpoint) (and (set.member {0} "
               "justified_checkpoints) {1}))))",
               chk(c),
               quorum(fmt::format("(set.card {})", signers)));
        }
        line("(declare-const finalized_blocks (Set Hash))");
        for (std::size_t h = 0; h < h_; ++h) {
          std::vector<std::string> from;
          for (std::size_t c = 0; c < k_; ++c) {
            from.push_back(fmt::format(
                "(and (set.member {0} finalized_checkpoints) (= "
                "(checkpoint_block {0}) {1}))",
                chk(c),
                hash(h)));
          }
          line("(assert (= (set.member {} finalized_blocks) {}))",
               hash(h),
               fold("or", from, "false"));
        }
      }

      void slashing() {
        std::vector<std::string> kinds;
        if (rules_.double_vote_slashing) {
          kinds.emplace_back(
              "(= (checkpoint_slot t1) (checkpoint_slot t2))");
        }
        if (rules_.surround_vote_slashing) {
          kinds.emplace_back(
              "(and (chk_lt s2 s1) (< (checkpoint_slot t1) (checkpoint_slot "
              "t2)))");
          kinds.emplace_back(
              "(and (chk_lt s1 s2) (< (checkpoint_slot t2) (checkpoint_slot "
              "t1)))");
        }
        line("; E1: equal target slots; E2: one vote surrounds the other");
        line("(define-fun slashable_pair ((s1 Checkpoint) (t1 Checkpoint) (s2 "
             "Checkpoint) (t2 Checkpoint)) Bool (and (not (and (= s1 s2) (= "
             "t1 t2))) {}))",
             fold("or", kinds, "false"));
        std::vector<std::string> pairs;
        for (std::size_t a = 0; a < k_ * k_; ++a) {
          for (std::size_t b = a + 1; b < k_ * k_; ++b) {
            pairs.push_back(fmt::format(
                "(and (set.member (Vote {0} {1} n) votes) (set.member (Vote "
                "{2} {3} n) votes) (slashable_pair {0} {1} {2} {3}))",
                chk(a / k_),
                chk(a % k_),
                chk(b / k_),
                chk(b % k_)));
          }
        }
        line("(define-fun slashed ((n Node)) Bool {})",
             fold("or", pairs, "false"));
        line("(declare-const slashable_nodes (Set Node))");
        for (std::size_t v = 0; v < n_; ++v) {
          line("(assert (= (set.member {0} slashable_nodes) (slashed {0})))",
               node(v));
        }
      }

      void goal() {
        if (query_ == SmtQuery::FinalizedNonGenesis) {
          line("; find a finalized checkpoint (besides genesis)");
          line("(assert (not (= finalized_checkpoints (set.singleton "
               "genesis_checkpoint))))");
        } else {
          line("; there is a counterexample to AccountableSafety");
          line("(assert (and");
          line("  (exists ((block1 Hash) (block2 Hash))");
          line("    (and");
          line("      (conflicting block1 block2)");
          line("      (set.member block1 finalized_blocks)");
          line("      (set.member block2 finalized_blocks)");
          line("  ) )");
          line("  (< (* 3 (set.card slashable_nodes)) N)");
          line("))");
        }
        line("(check-sat)");
      }

      const Bounds &b_;
      SmtQuery query_;
      RuleSet rules_;
      SmtOptions opt_;
      std::size_t h_;
      std::size_t k_;
      std::size_t n_;
      std::string out_;
    };

  }  // namespace

  SmtInstance emit_smt(const Bounds &bounds,
                       SmtQuery query,
                       Mutation mutation,
                       const SmtOptions &options) {
    if (bounds.n_validators == 0) {
      throw InputError("cannot emit an instance without nodes");
    }
    if (bounds.n_validators > kMaxSmtNodes) {
      throw InputError(fmt::format("{} nodes exceed the emitter limit of {}",
                                   bounds.n_validators,
                                   kMaxSmtNodes));
    }
    if (options.n_checkpoints == 0
        || options.n_checkpoints > kMaxSmtCheckpoints) {
      throw InputError(fmt::format("checkpoints must be in [1, {}], got {}",
                                   kMaxSmtCheckpoints,
                                   options.n_checkpoints));
    }
    if (bounds.n_blocks + 1 > kMaxSmtHashes) {
      throw InputError(fmt::format("{} hashes exceed the emitter limit of {}",
                                   bounds.n_blocks + 1,
                                   kMaxSmtHashes));
    }
    SmtInstance inst;
    inst.bounds = bounds;
    inst.query = query;
    inst.mutation = mutation;
    inst.options = options;
    inst.text = Emitter(bounds, query, rules_for(mutation), options).run();
    return inst;
  }

  namespace {

    std::optional<SolverResult::Status> status_token(const std::string &out) {
      std::istringstream in(out);
      std::string tok;
      while (in >> tok) {
        if (tok == "sat") {
          return SolverResult::Status::Sat;
        }
        if (tok == "unsat") {
          return SolverResult::Status::Unsat;
        }
        if (tok == "unknown") {
          return SolverResult::Status::Unknown;
        }
      }
      return std::nullopt;
    }

  }  // namespace

  SolverResult run_solver(const SmtInstance &instance,
                          const std::string &command,
                          std::chrono::seconds timeout) {
    SolverResult result;
    if (command.empty()) {
      result.status = SolverResult::Status::SolverAbsent;
      return result;
    }

    auto dir = std::filesystem::temp_directory_path();
    std::string path = (dir / "ffgmc-XXXXXX.smt2").string();
    const int fd = mkstemps(path.data(), 5);
    if (fd < 0) {
      throw std::runtime_error("cannot create temporary SMT file");
    }
    ::close(fd);
    {
      std::ofstream f(path);
      f << instance.text;
    }

    std::string cmd = command;
    if (auto pos = cmd.find("{file}"); pos != std::string::npos) {
      cmd.replace(pos, 6, path);
    } else {
      cmd += " " + path;
    }

    int pipefd[2];
    if (::pipe(pipefd) != 0) {
      std::filesystem::remove(path);
      throw std::runtime_error("pipe failed");
    }
    const pid_t pid = ::fork();
    if (pid == 0) {
      ::setpgid(0, 0);
      ::dup2(pipefd[1], STDOUT_FILENO);
      const int devnull = ::open("/dev/null", O_WRONLY);
      if (devnull >= 0) {
        ::dup2(devnull, STDERR_FILENO);
      }
      ::close(pipefd[0]);
      ::close(pipefd[1]);
      ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char *>(nullptr));
      ::_exit(127);
    }
    ::close(pipefd[1]);
    if (pid < 0) {
      ::close(pipefd[0]);
      std::filesystem::remove(path);
      throw std::runtime_error("fork failed");
    }

    const auto deadline = std::chrono::steady_clock::now() + timeout;
    bool timed_out = false;
    std::array<char, 4096> buf;
    while (true) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        timed_out = true;
        break;
      }
      pollfd p{pipefd[0], POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left.count()));
      if (r < 0 && errno == EINTR) {
        continue;
      }
      if (r == 0) {
        timed_out = true;
        break;
      }
      const auto n = ::read(pipefd[0], buf.data(), buf.size());
      if (n <= 0) {
        break;
      }
      result.output.append(buf.data(), static_cast<std::size_t>(n));
    }
    if (timed_out) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
    }
    ::close(pipefd[0]);
    int status = 0;
    ::waitpid(pid, &status, 0);
    std::filesystem::remove(path);

    if (timed_out) {
      result.status = SolverResult::Status::Unknown;
      return result;
    }
    if (auto tok = status_token(result.output)) {
      result.status = *tok;
      return result;
    }
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.status = code == 127 || code == 126
        ? SolverResult::Status::SolverAbsent
        : SolverResult::Status::Unknown;
    return result;
  }

}  // namespace ffgmc
