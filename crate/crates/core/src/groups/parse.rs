use std::path::Path;

use super::{FiniteTable, GroupError, GroupSpec};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    base_dir: &'a Path,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, GroupError> {
        Err(GroupError::Parse {
            pos: self.pos + 1,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<GroupSpec, GroupError> {
        let mut lhs = self.atom()?;
        loop {
            self.skip_ws();
            if self.eat("x") {
                self.skip_ws();
                if !self.eat("Z") || self.peek().is_some_and(|c| c.is_alphanumeric()) {
                    return self.err("expected `Z` after `x`");
                }
                lhs = lhs.direct_z();
            } else if self.eat("*") {
                let rhs = self.atom()?;
                lhs = lhs.free_product(rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn atom(&mut self) -> Result<GroupSpec, GroupError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.expr()?;
            self.skip_ws();
            if !self.eat(")") {
                return self.err("expected `)`");
            }
            return Ok(inner);
        }
        if self.eat("finite:") {
            let path: String = self
                .rest()
                .chars()
                .take_while(|c| !c.is_whitespace() && *c != ')')
                .collect();
            if path.is_empty() {
                return self.err("expected a table file after `finite:`");
            }
            let full = self.base_dir.join(&path);
            let table = FiniteTable::load(&full)?;
            self.pos += path.len();
            return Ok(GroupSpec::finite(path, table));
        }
        if self.eat("F") {
            let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
            let rank: u16 = match digits.parse() {
                Ok(r) if r >= 1 => r,
                _ => return self.err("expected a positive rank after `F`"),
            };
            self.pos += digits.len();
            return Ok(GroupSpec::Free(rank));
        }
        if self.eat("Z") {
            return Ok(GroupSpec::Free(1));
        }
        self.err("expected `F<n>`, `Z`, `finite:<file>` or `(`")
    }
}

pub(super) fn parse_spec(text: &str, base_dir: &Path) -> Result<GroupSpec, GroupError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        base_dir,
    };
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("unexpected trailing input");
    }
    Ok(spec)
}
