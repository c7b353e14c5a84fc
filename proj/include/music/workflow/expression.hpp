/*
 * Copyright 2026 The music-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MUSIC_WORKFLOW_EXPRESSION_HPP
#define MUSIC_WORKFLOW_EXPRESSION_HPP

#include <music/error.hpp>
#include <music/workflow/workflow.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace music {

/// Parsed workflow template. Grammar:
///
///   expr  := name [':' kb] | op '(' expr {',' expr} ')' | 'loop' '(' int ',' expr ')'
///   op    := 'seq' | 'and' | 'xor'
///
/// Leaves without an explicit size take the instance data size.
struct TemplateNode
{
    Pattern pattern = Pattern::Leaf;
    std::string function;
    std::optional<double> fixed_kb;
    int repeat = 1;
    std::vector<TemplateNode> children;

    [[nodiscard]] std::size_t occurrence_count() const
    {
        if (pattern == Pattern::Leaf)
            return 1;
        std::size_t n = 0;
        for (const auto& c : children)
            n += c.occurrence_count();
        return n;
    }

    void collect_functions(std::vector<std::string>& out) const
    {
        if (pattern == Pattern::Leaf) {
            out.push_back(function);
            return;
        }
        for (const auto& c : children)
            c.collect_functions(out);
    }

    /// Concrete workflow; `resolve` maps function names to ids.
    [[nodiscard]] WorkflowNode instantiate(const std::function<FunctionId(const std::string&)>& resolve,
                                           double data_kb) const
    {
        switch (pattern) {
        case Pattern::Leaf: return WorkflowNode::leaf(resolve(function), fixed_kb.value_or(data_kb));
        case Pattern::Loop: return WorkflowNode::loop(children.front().instantiate(resolve, data_kb), repeat);
        default: {
            std::vector<WorkflowNode> kids;
            kids.reserve(children.size());
            for (const auto& c : children)
                kids.push_back(c.instantiate(resolve, data_kb));
            if (pattern == Pattern::Seq)
                return WorkflowNode::seq(std::move(kids));
            if (pattern == Pattern::And)
                return WorkflowNode::all(std::move(kids));
            return WorkflowNode::any(std::move(kids));
        }
        }
    }
};

namespace detail {

class ExpressionParser
{
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    TemplateNode parse()
    {
        TemplateNode root = expr();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw InvalidWorkflow(why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    std::string identifier()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-'))
            ++pos_;
        if (start == pos_)
            fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    double number()
    {
        skip_space();
        const std::string rest(text_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str())
            fail("expected a number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return v;
    }

    TemplateNode expr()
    {
        TemplateNode node;
        const std::string name = identifier();
        if (!accept('(')) {
            node.pattern = Pattern::Leaf;
            node.function = name;
            if (accept(':')) {
                node.fixed_kb = number();
                if (!(*node.fixed_kb > 0.0))
                    fail("leaf size must be positive");
            }
            return node;
        }
        if (name == "loop") {
            node.pattern = Pattern::Loop;
            const double k = number();
            if (k < 1.0 || k != static_cast<double>(static_cast<int>(k)))
                fail("loop count must be a positive integer");
            node.repeat = static_cast<int>(k);
            expect(',');
            node.children.push_back(expr());
            expect(')');
            return node;
        }
        if (name == "seq")
            node.pattern = Pattern::Seq;
        else if (name == "and")
            node.pattern = Pattern::And;
        else if (name == "xor")
            node.pattern = Pattern::Xor;
        else
            fail("unknown pattern '" + name + "'");
        do {
            node.children.push_back(expr());
        } while (accept(','));
        expect(')');
        if (node.pattern == Pattern::Xor && node.children.size() < 2)
            fail("xor needs at least two branches");
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline TemplateNode parse_workflow_expression(std::string_view text)
{
    return detail::ExpressionParser(text).parse();
}

inline std::string to_expression(const TemplateNode& n)
{
    switch (n.pattern) {
    case Pattern::Leaf: {
        std::string s = n.function;
        if (n.fixed_kb) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ":%g", *n.fixed_kb);
            s += buf;
        }
        return s;
    }
    case Pattern::Loop: return "loop(" + std::to_string(n.repeat) + ", " + to_expression(n.children.front()) + ")";
    default: {
        std::string s = std::string(to_string(n.pattern)) + "(";
        for (std::size_t i = 0; i < n.children.size(); ++i)
            s += (i ? ", " : "") + to_expression(n.children[i]);
        return s + ")";
    }
    }
}

} // namespace music

#endif // MUSIC_WORKFLOW_EXPRESSION_HPP
