//! Text serialisation in the LP file format, plus a small structural linter
//! for the subset of the format the writer produces.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{MipModel, Var};

/// Lines are wrapped before this width; the format caps them at 255.
const WRAP: usize = 200;
const MAX_LINE: usize = 255;

struct Lines {
    out: String,
    line: String,
}

impl Lines {
    fn start(&mut self, head: &str) {
        self.flush();
        self.line.push_str(head);
    }

    fn token(&mut self, token: &str) {
        if self.line.len() + 1 + token.len() > WRAP {
            self.flush();
            self.line.push_str("   ");
        }
        self.line.push(' ');
        self.line.push_str(token);
    }

    fn flush(&mut self) {
        if !self.line.is_empty() {
            self.out.push_str(&self.line);
            self.out.push('\n');
            self.line.clear();
        }
    }
}

fn push_terms(lines: &mut Lines, terms: impl Iterator<Item = (i128, Var)>) {
    for (k, (coef, var)) in terms.enumerate() {
        let sign = if coef < 0 { "-" } else { "+" };
        if k > 0 || coef < 0 {
            lines.token(sign);
        }
        let name = var.name();
        if coef.unsigned_abs() == 1 {
            lines.token(&name);
        } else {
            lines.token(&format!("{} {name}", coef.unsigned_abs()));
        }
    }
}

/// Serialises the model. Row and variable order follow the model, so equal
/// models give byte-identical text.
pub fn write_lp_text(model: &MipModel) -> String {
    let mut lines = Lines { out: String::new(), line: String::new() };
    lines.start(&format!("\\ n = {}, M = {}", model.n, model.big_m));
    lines.start("Minimize");
    lines.start(" obj:");
    push_terms(&mut lines, model.objective.iter().map(|&v| (1, v)));
    lines.start("Subject To");
    for row in &model.rows {
        lines.start(&format!(" {}:", row.name));
        push_terms(&mut lines, row.terms.iter().copied());
        lines.token(row.sense.symbol());
        lines.token(&row.rhs.to_string());
    }
    lines.start("Bounds");
    lines.start(" t_0 = 0");
    lines.start("Binaries");
    lines.start("");
    for &(i, j) in &model.arcs {
        lines.token(&Var::X(i, j).name());
    }
    lines.start("End");
    lines.flush();
    lines.out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintIssue {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Integers,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.trim().to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" | "maximize" | "maximise" | "max" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binaries" | "binary" | "bin" | "generals" | "general" | "gen" => Some(Section::Integers),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || "_.[]{}!\"#$%&()/,;?@'`|~".contains(c))
}

fn is_number(s: &str) -> bool {
    !s.is_empty() && s.parse::<f64>().is_ok() && !s.starts_with(['e', 'E'])
}

fn split_tokens(text: &str) -> Vec<String> {
    let mut spaced = String::with_capacity(text.len() * 2);
    let bytes = text.as_bytes();
    for (i, ch) in text.char_indices() {
        let after_exponent = i > 0 && matches!(bytes[i - 1], b'e' | b'E') && i > 1 && bytes[i - 2].is_ascii_digit();
        match ch {
            '+' | '-' if !after_exponent => {
                spaced.push(' ');
                spaced.push(ch);
                spaced.push(' ');
            }
            _ => spaced.push(ch),
        }
    }
    spaced.split_whitespace().map(ToString::to_string).collect()
}

/// Parses `[+|-] [coef] var ...` and returns the variables, or a message.
fn parse_expression(tokens: &[String]) -> Result<Vec<String>, String> {
    let mut vars = Vec::new();
    let mut k = 0;
    let mut expect_sign = false;
    while k < tokens.len() {
        let tok = tokens[k].as_str();
        if tok == "+" || tok == "-" {
            k += 1;
            expect_sign = false;
            continue;
        }
        if expect_sign {
            return Err(format!("missing operator before `{tok}`"));
        }
        if is_number(tok) {
            k += 1;
            match tokens.get(k) {
                Some(v) if valid_name(v) => {}
                _ => return Err(format!("coefficient `{tok}` is not followed by a variable")),
            }
        }
        let var = tokens[k].as_str();
        if !valid_name(var) {
            return Err(format!("`{var}` is not a valid variable name"));
        }
        vars.push(var.to_string());
        expect_sign = true;
        k += 1;
    }
    if vars.is_empty() {
        return Err("empty expression".into());
    }
    Ok(vars)
}

fn lint_row(text: &str, line: usize, needs_sense: bool, names: &mut BTreeSet<String>, used: &mut BTreeSet<String>, issues: &mut Vec<LintIssue>) {
    let mut issue = |message: String| issues.push(LintIssue { line, message });
    let (label, body) = match text.split_once(':') {
        Some((label, body)) => (label.trim(), body),
        None => ("", text),
    };
    if !label.is_empty() {
        if !valid_name(label) {
            issue(format!("row name `{label}` is not valid"));
        }
        if !names.insert(label.to_string()) {
            issue(format!("duplicate row name `{label}`"));
        }
    } else if needs_sense {
        issue("constraint without a name".into());
    }
    let tokens = split_tokens(&body.replace("<=", " <= ").replace(">=", " >= ").replace("=<", " <= ").replace("=>", " >= "));
    let sense_at = tokens.iter().position(|t| matches!(t.as_str(), "<=" | ">=" | "=" | "<" | ">"));
    let lhs = match (needs_sense, sense_at) {
        (true, None) => {
            issue("constraint without a comparison".into());
            return;
        }
        (false, Some(_)) => {
            issue("comparison in the objective".into());
            return;
        }
        (true, Some(at)) => {
            let rhs = &tokens[at + 1..];
            let rhs_ok = match rhs {
                [num] => is_number(num),
                [sign, num] => (sign == "-" || sign == "+") && is_number(num),
                _ => false,
            };
            if !rhs_ok {
                issue("right-hand side must be a single constant".into());
            }
            &tokens[..at]
        }
        (false, None) => &tokens[..],
    };
    match parse_expression(lhs) {
        Ok(vars) => used.extend(vars),
        Err(message) => issue(message),
    }
}

fn lint_bound(text: &str, line: usize, used: &BTreeSet<String>, issues: &mut Vec<LintIssue>) {
    let tokens = split_tokens(&text.replace("<=", " <= ").replace(">=", " >= "));
    let toks: Vec<&str> = tokens.iter().map(String::as_str).collect();
    let number = |parts: &[&str]| match parts {
        [num] => is_number(num) || num.eq_ignore_ascii_case("inf") || num.eq_ignore_ascii_case("infinity"),
        [sign, num] => (*sign == "-" || *sign == "+") && (is_number(num) || num.eq_ignore_ascii_case("inf")),
        _ => false,
    };
    let ok = match toks.as_slice() {
        [var, free] if free.eq_ignore_ascii_case("free") => valid_name(var),
        [var, op, rest @ ..] if matches!(*op, "=" | "<=" | ">=") => valid_name(var) && number(rest),
        _ => {
            // lo <= var <= hi
            let ops: Vec<usize> = toks.iter().enumerate().filter(|(_, t)| **t == "<=").map(|(i, _)| i).collect();
            ops.len() == 2
                && ops[1] == ops[0] + 2
                && number(&toks[..ops[0]])
                && valid_name(toks[ops[0] + 1])
                && number(&toks[ops[1] + 1..])
        }
    };
    if !ok {
        issues.push(LintIssue { line, message: format!("malformed bound `{}`", text.trim()) });
    } else if let Some(var) = toks.first().filter(|v| valid_name(v)) {
        if !used.contains(*var) {
            issues.push(LintIssue { line, message: format!("bound on unused variable `{var}`") });
        }
    }
}

/// Structural checks: section order, named rows with one comparison and a
/// constant right-hand side, well-formed terms and bounds, unique row names,
/// declared integers that occur in the model, line lengths, and a closing
/// `End`. Returns every issue found; an empty list means the text passed.
pub fn lint_lp_text(text: &str) -> Vec<LintIssue> {
    let mut issues = Vec::new();
    let mut section = Section::Preamble;
    let mut names = BTreeSet::new();
    let mut used = BTreeSet::new();
    let mut pending: Option<(usize, String)> = None;
    let mut seen_objective = false;

    let flush = |pending: &mut Option<(usize, String)>, section: Section, names: &mut BTreeSet<String>, used: &mut BTreeSet<String>, issues: &mut Vec<LintIssue>| {
        if let Some((line, text)) = pending.take() {
            lint_row(&text, line, section == Section::Constraints, names, used, issues);
        }
    };

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if raw.len() > MAX_LINE {
            issues.push(LintIssue { line, message: format!("line has {} characters, limit is {MAX_LINE}", raw.len()) });
        }
        let content = raw.split('\\').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if let Some(next) = section_of(content) {
            flush(&mut pending, section, &mut names, &mut used, &mut issues);
            if section == Section::End {
                issues.push(LintIssue { line, message: "content after End".into() });
            } else if next <= section {
                issues.push(LintIssue { line, message: format!("section `{}` out of order", content.trim()) });
            } else if next > Section::Objective && !seen_objective {
                issues.push(LintIssue { line, message: "missing objective section".into() });
                seen_objective = true;
            }
            if next == Section::Objective {
                seen_objective = true;
            }
            section = next;
            continue;
        }
        match section {
            Section::Preamble => issues.push(LintIssue { line, message: "content before the objective section".into() }),
            Section::End => issues.push(LintIssue { line, message: "content after End".into() }),
            Section::Objective | Section::Constraints => {
                let continuation = raw.starts_with(char::is_whitespace) && !content.contains(':') && pending.is_some();
                if continuation {
                    if let Some((_, text)) = pending.as_mut() {
                        text.push(' ');
                        text.push_str(content.trim());
                    }
                } else {
                    flush(&mut pending, section, &mut names, &mut used, &mut issues);
                    pending = Some((line, content.trim().to_string()));
                }
            }
            Section::Bounds => lint_bound(content, line, &used, &mut issues),
            Section::Integers => {
                for var in content.split_whitespace() {
                    if !valid_name(var) {
                        issues.push(LintIssue { line, message: format!("`{var}` is not a valid variable name") });
                    } else if !used.contains(var) {
                        issues.push(LintIssue { line, message: format!("integer variable `{var}` does not occur in the model") });
                    }
                }
            }
        }
    }
    flush(&mut pending, section, &mut names, &mut used, &mut issues);
    if section != Section::End {
        let line = text.lines().count();
        issues.push(LintIssue { line, message: "missing End".into() });
    }
    issues
}
