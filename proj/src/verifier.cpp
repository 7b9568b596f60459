#include "keymaze/verifier.hpp"

#include <algorithm>
#include <cctype>

namespace keymaze {

namespace {

constexpr std::string_view category_names[] = {
    "start",  "adjacency", "locked_door", "key_usage",
    "unlock_sequence", "rescue", "parse",
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Cursor over the text after the marker. Understands ASCII quotes and the
// UTF-8 typographic quote pairs, and skips ``` fence lines as whitespace.
struct cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws() {
    for (;;) {
      while (!done() && is_space(peek())) ++pos;
      if (!done() && text.substr(pos, 3) == "```") {
        pos += 3;
        // fence tag like ```python up to end of line
        while (!done() && peek() != '\n') ++pos;
        continue;
      }
      break;
    }
  }

  bool eat(char c) {
    if (done() || peek() != c) return false;
    ++pos;
    return true;
  }

  // Matches one opening quote: ' " or a UTF-8 typographic quote.
  bool eat_quote() {
    if (done()) return false;
    if (peek() == '\'' || peek() == '"') {
      ++pos;
      return true;
    }
    const auto tri = text.substr(pos, 3);
    if (tri == "\xe2\x80\x98" || tri == "\xe2\x80\x99" ||
        tri == "\xe2\x80\x9c" || tri == "\xe2\x80\x9d") {
      pos += 3;
      return true;
    }
    return false;
  }

  bool at_quote() const {
    if (done()) return false;
    if (peek() == '\'' || peek() == '"') return true;
    const auto tri = text.substr(pos, 3);
    return tri == "\xe2\x80\x98" || tri == "\xe2\x80\x99" ||
           tri == "\xe2\x80\x9c" || tri == "\xe2\x80\x9d";
  }
};

// Strict decimal key id; rejects trailing junk that std::stoi would accept.
int parse_key_id(std::string_view arg) {
  if (arg.empty() || arg.size() > 9) return -1;
  int value = 0;
  for (const char ch : arg) {
    if (ch < '0' || ch > '9') return -1;
    value = value * 10 + (ch - '0');
  }
  return value;
}

parse_outcome fail(std::string error, std::size_t offset) {
  parse_outcome out;
  out.ok = false;
  out.error = std::move(error);
  out.offset = offset;
  return out;
}

bool parse_quoted(cursor& c, std::string& token) {
  if (!c.eat_quote()) return false;
  token.clear();
  while (!c.done() && !c.at_quote()) {
    token.push_back(c.peek());
    ++c.pos;
  }
  return c.eat_quote();
}

}  // namespace

std::string_view violation_category_name(violation_category c) {
  return category_names[static_cast<int>(c)];
}

parse_outcome parse_solution(std::string_view raw) {
  constexpr std::string_view marker = "solution:";
  std::size_t marker_end = std::string_view::npos;
  for (std::size_t i = 0; i + marker.size() <= raw.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < marker.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(raw[i + k])) != marker[k]) {
        hit = false;
        break;
      }
    }
    if (hit) marker_end = i + marker.size();
  }
  if (marker_end == std::string_view::npos) {
    return fail("no \"Solution:\" marker", 0);
  }

  cursor c{raw.substr(marker_end), 0};
  const auto offset = [&]() { return marker_end + c.pos; };

  c.skip_ws();
  if (!c.eat('[')) return fail("expected '[' to open the action list", offset());

  parse_outcome out;
  for (;;) {
    c.skip_ws();
    if (c.eat(']')) break;
    if (!c.eat('(')) return fail("expected '(' to open a tuple", offset());
    c.skip_ws();
    std::string verb_token;
    if (!parse_quoted(c, verb_token)) {
      return fail("expected quoted verb", offset());
    }
    c.skip_ws();
    if (!c.eat(',')) return fail("expected ',' inside tuple", offset());
    c.skip_ws();
    std::string arg_token;
    if (!parse_quoted(c, arg_token)) {
      return fail("expected quoted argument", offset());
    }
    c.skip_ws();
    if (!c.eat(')')) return fail("expected ')' to close a tuple", offset());
    const auto v = parse_verb(verb_token);
    if (!v) return fail("unknown verb '" + verb_token + "'", offset());
    out.actions.push_back(normalize(make_action(*v, std::move(arg_token))));
    c.skip_ws();
    if (c.eat(',')) continue;
    c.skip_ws();
    if (c.eat(']')) break;
    return fail("expected ',' or ']' after tuple", offset());
  }
  out.ok = true;
  return out;
}

verification_report execute(const action_seq& actions, const world& w) {
  verification_report report;
  world_state st;
  st.current_room = w.start;

  const auto violate = [&](int step, violation_category cat,
                           std::string detail) {
    report.violations.push_back({step, cat, std::move(detail)});
  };

  for (int step = 0; step < static_cast<int>(actions.size()); ++step) {
    const action a = normalize(actions[step]);
    st.step = step;
    // A pending unlock survives only across the use_key -> unlock pair.
    const std::optional<edge_pair> pending = st.pending_unlock;
    st.pending_unlock.reset();

    switch (a.v) {
      case verb::start: {
        const auto room = cell_label::parse(a.arg);
        if (step != 0) {
          violate(step, violation_category::start, "start after step 0");
        } else if (!room || *room != w.start) {
          violate(step, violation_category::start,
                  "start must be at " + w.start.str());
        }
        break;
      }
      case verb::move_to: {
        const auto room = cell_label::parse(a.arg);
        if (!room) {
          violate(step, violation_category::adjacency,
                  "'" + a.arg + "' is not a room");
          break;
        }
        if (!w.has_edge(st.current_room, *room)) {
          violate(step, violation_category::adjacency,
                  st.current_room.str() + " and " + room->str() +
                      " are not connected");
          break;
        }
        const door* d = w.door_at(st.current_room, *room);
        if (d && !st.opened_doors.count(d->edge())) {
          violate(step, violation_category::locked_door,
                  "door to " + room->str() + " is locked");
          break;
        }
        st.current_room = *room;
        break;
      }
      case verb::pick_up_key: {
        const int id = parse_key_id(a.arg);
        bool here = false;
        for (const key_info* k : w.keys_in_room(st.current_room)) {
          if (k->key_id == id) here = true;
        }
        if (!here) {
          violate(step, violation_category::key_usage,
                  "key " + a.arg + " is not in " + st.current_room.str());
        } else if (st.held_keys.count(id)) {
          violate(step, violation_category::key_usage,
                  "key " + a.arg + " already held");
        } else {
          st.held_keys.insert(id);
        }
        break;
      }
      case verb::use_key: {
        const int id = parse_key_id(a.arg);
        if (!st.held_keys.count(id)) {
          violate(step, violation_category::key_usage,
                  "key " + a.arg + " not held");
          break;
        }
        const door* target = nullptr;
        for (const auto& d : w.doors) {
          if (d.key_id == id) target = &d;
        }
        if (!target) {
          violate(step, violation_category::key_usage,
                  "key " + a.arg + " opens no door");
          break;
        }
        if (target->a != st.current_room && target->b != st.current_room) {
          violate(step, violation_category::key_usage,
                  "door for key " + a.arg + " is not adjacent");
          break;
        }
        if (st.opened_doors.count(target->edge())) {
          violate(step, violation_category::key_usage,
                  "door for key " + a.arg + " is already open");
          break;
        }
        st.pending_unlock = target->edge();
        break;
      }
      case verb::unlock_and_open_door_to: {
        const auto room = cell_label::parse(a.arg);
        if (!pending || !room ||
            make_edge(st.current_room, *room) != *pending) {
          violate(step, violation_category::unlock_sequence,
                  "unlock without a matching use_key");
          break;
        }
        st.opened_doors.insert(*pending);
        break;
      }
      case verb::rescue: {
        if (a.arg != "Alice" || st.current_room != w.goal) {
          violate(step, violation_category::rescue,
                  "rescue requires being in " + w.goal.str());
        } else {
          st.rescued = true;
        }
        break;
      }
    }
  }

  report.goal_reached = st.rescued;
  if (!report.violations.empty()) {
    report.first_violation_step = report.violations.front().step;
  }
  return report;
}

bool exact_match(const action_seq& pred, const action_seq& gt) {
  if (pred.size() != gt.size()) return false;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (normalize(pred[i]) != normalize(gt[i])) return false;
  }
  return true;
}

verification_report verify_response(std::string_view raw_model_text,
                                    const world& w, const action_seq& gt) {
  const parse_outcome parsed = parse_solution(raw_model_text);
  if (!parsed) {
    verification_report report;
    report.parsed_ok = false;
    report.violations.push_back(
        {0, violation_category::parse, parsed.error});
    report.first_violation_step = 0;
    return report;
  }
  verification_report report = execute(parsed.actions, w);
  report.exact_match = report.parsed_ok && exact_match(parsed.actions, gt);
  return report;
}

}  // namespace keymaze
