// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/lang/typecheck.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace rdemon::lang {

std::optional<StreamId> TypedSpecification::find(std::string_view name) const {
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (streams[i].name == name) return static_cast<StreamId>(i);
  }
  return std::nullopt;
}

const OutputDecl& TypedSpecification::output(StreamId id) const {
  return spec.outputs.at(static_cast<std::size_t>(streams.at(id).output_index));
}

namespace {

struct References {
  std::set<StreamId> direct;
  std::set<StreamId> windowed;
  bool has_window = false;
};

class Checker {
 public:
  explicit Checker(Specification spec) { ts_.spec = std::move(spec); }

  TypedSpecification run() {
    build_stream_table();
    number_nodes();
    collect_references();
    check_pacing();
    check_hard_cycles();
    compute_layers();
    infer_types();
    check_triggers();
    compute_event_dependents();
    collect_warnings();
    return std::move(ts_);
  }

 private:
  std::string owner_name(std::size_t out) const { return "output " + ts_.spec.outputs[out].name; }

  void build_stream_table() {
    std::unordered_map<std::string, StreamId> ids;
    for (const auto& in : ts_.spec.inputs) {
      if (ids.contains(in.name)) throw DuplicateStream(in.pos, in.name);
      ids[in.name] = static_cast<StreamId>(ts_.streams.size());
      StreamInfo info;
      info.name = in.name;
      info.type = in.type;
      info.is_input = true;
      ts_.streams.push_back(info);
    }
    for (std::size_t i = 0; i < ts_.spec.outputs.size(); ++i) {
      const auto& out = ts_.spec.outputs[i];
      if (ids.contains(out.name)) throw DuplicateStream(out.pos, out.name);
      ids[out.name] = static_cast<StreamId>(ts_.streams.size());
      StreamInfo info;
      info.name = out.name;
      info.rate_hz = out.rate_hz;
      info.filtered = out.filter != nullptr;
      info.output_index = static_cast<int>(i);
      ts_.streams.push_back(info);
    }
    ids_ = std::move(ids);
  }

  StreamId output_id(std::size_t out) const {
    return static_cast<StreamId>(ts_.spec.inputs.size() + out);
  }

  // Assigns dense ids to every node, resolves names and registers windows.
  void number_nodes() {
    int next = 0;
    std::function<void(Expr&)> visit = [&](Expr& e) {
      e.id = next++;
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, StreamRef>) {
              n.resolved = resolve(n.name, e.pos);
            } else if constexpr (std::is_same_v<T, WindowExpr>) {
              n.resolved = resolve(n.stream, e.pos);
              if (!(n.duration_s > 0.0)) throw TypeError(e.pos, "window duration must be positive");
              if (n.fn.kind == AggregationKind::Percentile &&
                  !(n.fn.percentile > 0.0 && n.fn.percentile < 100.0)) {
                throw TypeError(e.pos, "percentile must lie strictly between 0 and 100");
              }
              n.slot = static_cast<int>(ts_.windows.size());
              ts_.windows.push_back(WindowInfo{n.slot, n.resolved, n.duration_s, n.fn});
            } else if constexpr (std::is_same_v<T, Unary>) {
              visit(*n.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
              visit(*n.lhs);
              visit(*n.rhs);
            } else if constexpr (std::is_same_v<T, DefaultExpr>) {
              visit(*n.expr);
            } else if constexpr (std::is_same_v<T, Conditional>) {
              visit(*n.condition);
              visit(*n.then_branch);
              visit(*n.else_branch);
            }
          },
          e.node);
    };
    for (auto& out : ts_.spec.outputs) {
      if (!out.body) throw TypeError(out.pos, "output " + out.name + " has no body");
      if (out.filter) visit(*out.filter);
      visit(*out.body);
    }
    for (auto& trig : ts_.spec.triggers) {
      if (!trig.condition) throw TypeError(trig.pos, "trigger has no condition");
      visit(*trig.condition);
    }
    ts_.node_types.assign(static_cast<std::size_t>(next), ValueType::Float64);
    ts_.windows_of.assign(ts_.streams.size(), {});
    for (const auto& w : ts_.windows) ts_.windows_of[static_cast<std::size_t>(w.source)].push_back(w.slot);
  }

  StreamId resolve(const std::string& name, SourcePos pos) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) throw UndeclaredStream(pos, name);
    return it->second;
  }

  static void gather(const Expr& e, References& refs) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, StreamRef>) {
            refs.direct.insert(n.resolved);
          } else if constexpr (std::is_same_v<T, WindowExpr>) {
            refs.windowed.insert(n.resolved);
            refs.has_window = true;
          } else if constexpr (std::is_same_v<T, Unary>) {
            gather(*n.operand, refs);
          } else if constexpr (std::is_same_v<T, Binary>) {
            gather(*n.lhs, refs);
            gather(*n.rhs, refs);
          } else if constexpr (std::is_same_v<T, DefaultExpr>) {
            gather(*n.expr, refs);
          } else if constexpr (std::is_same_v<T, Conditional>) {
            gather(*n.condition, refs);
            gather(*n.then_branch, refs);
            gather(*n.else_branch, refs);
          }
        },
        e.node);
  }

  void collect_references() {
    out_refs_.resize(ts_.spec.outputs.size());
    for (std::size_t i = 0; i < ts_.spec.outputs.size(); ++i) {
      const auto& out = ts_.spec.outputs[i];
      if (out.filter) gather(*out.filter, out_refs_[i]);
      gather(*out.body, out_refs_[i]);
    }
    trig_refs_.resize(ts_.spec.triggers.size());
    for (std::size_t i = 0; i < ts_.spec.triggers.size(); ++i) {
      gather(*ts_.spec.triggers[i].condition, trig_refs_[i]);
    }
  }

  bool is_periodic(StreamId id) const { return ts_.streams[static_cast<std::size_t>(id)].rate_hz.has_value(); }

  void check_pacing() {
    for (std::size_t i = 0; i < ts_.spec.outputs.size(); ++i) {
      const auto& out = ts_.spec.outputs[i];
      const auto& refs = out_refs_[i];
      if (!out.rate_hz) {
        if (refs.has_window) throw UntimedWindow(out.pos, owner_name(i));
        for (StreamId r : refs.direct) {
          if (is_periodic(r)) {
            throw TypeError(out.pos, "event-based " + owner_name(i) + " cannot read periodic stream " +
                                         ts_.streams[static_cast<std::size_t>(r)].name);
          }
        }
      } else {
        for (StreamId r : refs.direct) {
          const auto& other = ts_.streams[static_cast<std::size_t>(r)];
          if (other.rate_hz && *other.rate_hz != *out.rate_hz) {
            throw TypeError(out.pos, owner_name(i) + " reads stream " + other.name +
                                         " which runs at a different rate");
          }
        }
      }
    }
  }

  std::vector<std::size_t> output_successors(std::size_t out, bool include_windows) const {
    std::vector<std::size_t> deps;
    const auto& refs = out_refs_[out];
    auto add = [&](StreamId id) {
      const auto& s = ts_.streams[static_cast<std::size_t>(id)];
      if (!s.is_input) deps.push_back(static_cast<std::size_t>(s.output_index));
    };
    for (StreamId id : refs.direct) add(id);
    if (include_windows) {
      for (StreamId id : refs.windowed) add(id);
    }
    return deps;
  }

  // Direct references (outside windows) must not form a cycle.
  void check_hard_cycles() {
    const std::size_t n = ts_.spec.outputs.size();
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> stack;
    std::function<void(std::size_t)> dfs = [&](std::size_t u) {
      state[u] = 1;
      stack.push_back(u);
      for (std::size_t v : output_successors(u, false)) {
        if (state[v] == 1) {
          std::vector<std::string> cycle;
          auto it = std::find(stack.begin(), stack.end(), v);
          for (; it != stack.end(); ++it) cycle.push_back(ts_.spec.outputs[*it].name);
          cycle.push_back(ts_.spec.outputs[v].name);
          throw CyclicDependency(std::move(cycle));
        }
        if (state[v] == 0) dfs(v);
      }
      stack.pop_back();
      state[u] = 2;
    };
    for (std::size_t u = 0; u < n; ++u) {
      if (state[u] == 0) dfs(u);
    }
  }

  // Window references order their source first unless both ends sit on a
  // cycle; there the window only sees values from earlier time points.
  void compute_layers() {
    const std::size_t n = ts_.spec.outputs.size();
    // Tarjan SCC over the full graph.
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0, comps = 0;
    std::function<void(std::size_t)> strong = [&](std::size_t u) {
      index[u] = low[u] = counter++;
      stack.push_back(u);
      on_stack[u] = true;
      for (std::size_t v : output_successors(u, true)) {
        if (index[v] < 0) {
          strong(v);
          low[u] = std::min(low[u], low[v]);
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
      }
      if (low[u] == index[u]) {
        for (;;) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
          if (w == u) break;
        }
        ++comps;
      }
    };
    for (std::size_t u = 0; u < n; ++u) {
      if (index[u] < 0) strong(u);
    }

    std::vector<int> layer(n, -1);
    std::function<int(std::size_t)> depth = [&](std::size_t u) -> int {
      if (layer[u] >= 0) return layer[u];
      int d = 0;
      for (std::size_t v : output_successors(u, false)) d = std::max(d, depth(v) + 1);
      for (StreamId id : out_refs_[u].windowed) {
        const auto& s = ts_.streams[static_cast<std::size_t>(id)];
        if (s.is_input) continue;
        const auto v = static_cast<std::size_t>(s.output_index);
        if (comp[v] != comp[u]) d = std::max(d, depth(v) + 1);
      }
      layer[u] = d;
      return d;
    };
    int max_layer = -1;
    for (std::size_t u = 0; u < n; ++u) max_layer = std::max(max_layer, depth(u));
    ts_.layers.assign(static_cast<std::size_t>(max_layer + 1), {});
    for (std::size_t u = 0; u < n; ++u) {
      ts_.streams[static_cast<std::size_t>(output_id(u))].layer = layer[u];
      ts_.layers[static_cast<std::size_t>(layer[u])].push_back(output_id(u));
    }
  }

  // --- typing -------------------------------------------------------------

  struct Typed {
    ValueType type;
    bool may_be_absent;
  };

  std::vector<bool> typed_;

  Typed type_expr(const Expr& e) {
    Typed result = std::visit(
        [&](const auto& n) -> Typed {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
            return {ValueType::Float64, false};
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return {ValueType::Bool, false};
          } else if constexpr (std::is_same_v<T, StreamRef>) {
            const auto& s = stream_typed(n.resolved, e.pos);
            return {s.type, s.may_be_absent};
          } else if constexpr (std::is_same_v<T, Unary>) {
            const Typed inner = type_expr(*n.operand);
            const ValueType want = n.op == UnaryOp::Neg ? ValueType::Float64 : ValueType::Bool;
            expect_type(inner.type, want, e.pos, to_string(n.op));
            return {want, inner.may_be_absent};
          } else if constexpr (std::is_same_v<T, Binary>) {
            const Typed l = type_expr(*n.lhs);
            const Typed r = type_expr(*n.rhs);
            const bool absent = l.may_be_absent || r.may_be_absent;
            switch (n.op) {
              case BinaryOp::Add:
              case BinaryOp::Sub:
              case BinaryOp::Mul:
              case BinaryOp::Div:
                expect_type(l.type, ValueType::Float64, e.pos, to_string(n.op));
                expect_type(r.type, ValueType::Float64, e.pos, to_string(n.op));
                return {ValueType::Float64, absent};
              case BinaryOp::Lt:
              case BinaryOp::Le:
              case BinaryOp::Gt:
              case BinaryOp::Ge:
                expect_type(l.type, ValueType::Float64, e.pos, to_string(n.op));
                expect_type(r.type, ValueType::Float64, e.pos, to_string(n.op));
                return {ValueType::Bool, absent};
              case BinaryOp::Eq:
              case BinaryOp::Ne:
                expect_type(r.type, l.type, e.pos, to_string(n.op));
                return {ValueType::Bool, absent};
              case BinaryOp::And:
              case BinaryOp::Or:
                expect_type(l.type, ValueType::Bool, e.pos, to_string(n.op));
                expect_type(r.type, ValueType::Bool, e.pos, to_string(n.op));
                return {ValueType::Bool, absent};
            }
            return {ValueType::Bool, absent};
          } else if constexpr (std::is_same_v<T, WindowExpr>) {
            const auto& s = stream_typed(n.resolved, e.pos);
            if (n.fn.kind != AggregationKind::Count) {
              expect_type(s.type, ValueType::Float64, e.pos, "aggregate(" + to_string(n.fn) + ")");
            }
            return {ValueType::Float64, true};
          } else if constexpr (std::is_same_v<T, DefaultExpr>) {
            const Typed inner = type_expr(*n.expr);
            if (!inner.may_be_absent) {
              throw TypeError(e.pos, "defaults(to:) wraps an expression that always has a value");
            }
            expect_type(type_of(n.fallback), inner.type, e.pos, "defaults(to:)");
            return {inner.type, false};
          } else if constexpr (std::is_same_v<T, Conditional>) {
            const Typed c = type_expr(*n.condition);
            expect_type(c.type, ValueType::Bool, e.pos, "if condition");
            const Typed a = type_expr(*n.then_branch);
            const Typed b = type_expr(*n.else_branch);
            expect_type(b.type, a.type, e.pos, "else branch");
            return {a.type, c.may_be_absent || a.may_be_absent || b.may_be_absent};
          }
        },
        e.node);
    ts_.node_types[static_cast<std::size_t>(e.id)] = result.type;
    return result;
  }

  const StreamInfo& stream_typed(StreamId id, SourcePos pos) const {
    const auto& s = ts_.streams[static_cast<std::size_t>(id)];
    if (!typed_[static_cast<std::size_t>(id)]) {
      throw TypeError(pos, "cannot infer the type of " + s.name + "; add a type annotation");
    }
    return s;
  }

  static void expect_type(ValueType got, ValueType want, SourcePos pos, std::string_view what) {
    if (got != want) {
      throw TypeError(pos, std::string(what) + " expects " + std::string(to_string(want)) +
                               " but got " + std::string(to_string(got)));
    }
  }

  void infer_types() {
    typed_.assign(ts_.streams.size(), false);
    for (std::size_t i = 0; i < ts_.spec.inputs.size(); ++i) typed_[i] = true;
    for (std::size_t i = 0; i < ts_.spec.outputs.size(); ++i) {
      if (ts_.spec.outputs[i].type) {
        ts_.streams[static_cast<std::size_t>(output_id(i))].type = *ts_.spec.outputs[i].type;
        typed_[static_cast<std::size_t>(output_id(i))] = true;
      }
    }
    for (const auto& layer : ts_.layers) {
      for (StreamId id : layer) {
        auto& info = ts_.streams[static_cast<std::size_t>(id)];
        auto& out = ts_.spec.outputs[static_cast<std::size_t>(info.output_index)];
        bool absent = info.filtered || !info.rate_hz;
        if (out.filter) {
          const Typed f = type_expr(*out.filter);
          expect_type(f.type, ValueType::Bool, out.filter->pos, "filter of output " + out.name);
        }
        const Typed body = type_expr(*out.body);
        if (out.type) {
          expect_type(body.type, *out.type, out.body->pos, "output " + out.name);
        }
        absent = absent || body.may_be_absent;
        info.type = body.type;
        info.may_be_absent = absent;
        typed_[static_cast<std::size_t>(id)] = true;
      }
    }
  }

  void check_triggers() {
    std::set<double> rates;
    for (const auto& s : ts_.streams) {
      if (s.rate_hz) rates.insert(*s.rate_hz);
    }
    for (std::size_t i = 0; i < ts_.spec.triggers.size(); ++i) {
      const auto& trig = ts_.spec.triggers[i];
      const Typed c = type_expr(*trig.condition);
      expect_type(c.type, ValueType::Bool, trig.pos, "trigger condition");
      TriggerInfo info;
      const auto& refs = trig_refs_[i];
      info.referenced.assign(refs.direct.begin(), refs.direct.end());
      for (StreamId r : refs.direct) {
        const auto& s = ts_.streams[static_cast<std::size_t>(r)];
        if (!s.rate_hz) continue;
        if (info.rate_hz && *info.rate_hz != *s.rate_hz) {
          throw TypeError(trig.pos, "trigger reads periodic streams with different rates");
        }
        info.rate_hz = s.rate_hz;
      }
      if (refs.has_window && !info.rate_hz) throw UntimedWindow(trig.pos, "trigger");
      if (info.rate_hz) rates.insert(*info.rate_hz);
      ts_.triggers.push_back(std::move(info));
    }
    ts_.rates_hz.assign(rates.begin(), rates.end());
  }

  void compute_event_dependents() {
    const std::size_t inputs = ts_.spec.inputs.size();
    ts_.event_outputs.assign(inputs, {});
    ts_.event_triggers.assign(inputs, {});
    // Event-timed outputs only read inputs and other event-timed outputs.
    std::vector<std::set<StreamId>> depends_on(ts_.streams.size());
    for (const auto& layer : ts_.layers) {
      for (StreamId id : layer) {
        const auto& info = ts_.streams[static_cast<std::size_t>(id)];
        if (info.rate_hz) continue;
        auto& deps = depends_on[static_cast<std::size_t>(id)];
        for (StreamId r : out_refs_[static_cast<std::size_t>(info.output_index)].direct) {
          if (ts_.streams[static_cast<std::size_t>(r)].is_input) {
            deps.insert(r);
          } else {
            const auto& sub = depends_on[static_cast<std::size_t>(r)];
            deps.insert(sub.begin(), sub.end());
          }
        }
        for (StreamId in : deps) ts_.event_outputs[static_cast<std::size_t>(in)].push_back(id);
      }
    }
    for (std::size_t i = 0; i < ts_.triggers.size(); ++i) {
      if (ts_.triggers[i].rate_hz) continue;
      std::set<StreamId> deps;
      for (StreamId r : trig_refs_[i].direct) {
        if (ts_.streams[static_cast<std::size_t>(r)].is_input) {
          deps.insert(r);
        } else {
          const auto& sub = depends_on[static_cast<std::size_t>(r)];
          deps.insert(sub.begin(), sub.end());
        }
      }
      for (StreamId in : deps) ts_.event_triggers[static_cast<std::size_t>(in)].push_back(static_cast<int>(i));
    }
  }

  void collect_warnings() {
    std::vector<bool> used(ts_.streams.size(), false);
    auto mark = [&](const References& refs) {
      for (StreamId r : refs.direct) used[static_cast<std::size_t>(r)] = true;
      for (StreamId r : refs.windowed) used[static_cast<std::size_t>(r)] = true;
    };
    for (const auto& r : out_refs_) mark(r);
    for (const auto& r : trig_refs_) mark(r);
    for (std::size_t i = 0; i < ts_.spec.inputs.size(); ++i) {
      if (!used[i]) ts_.warnings.push_back("input " + ts_.spec.inputs[i].name + " is never read");
    }
  }

  TypedSpecification ts_;
  std::unordered_map<std::string, StreamId> ids_;
  std::vector<References> out_refs_;
  std::vector<References> trig_refs_;
};

}  // namespace

TypedSpecification typecheck(Specification spec) { return Checker(std::move(spec)).run(); }

}  // namespace rdemon::lang
