use thiserror::Error;

use super::LtlFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: unknown token `{token}`")]
    UnknownToken {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Until,
    Eventually,
    Globally,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&&`".into(),
            Tok::Or => "`||`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Next => "`X`".into(),
            Tok::Until => "`U`".into(),
            Tok::Eventually => "`F`".into(),
            Tok::Globally => "`G`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start_col = column;
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                "X" => Tok::Next,
                "U" => Tok::Until,
                "F" => Tok::Eventually,
                "G" => Tok::Globally,
                _ => Tok::Ident(word),
            };
            (tok, j - i)
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            if rest.starts_with("<->") {
                (Tok::Iff, 3)
            } else if rest.starts_with("->") {
                (Tok::Implies, 2)
            } else if rest.starts_with("&&") {
                (Tok::And, 2)
            } else if rest.starts_with("||") {
                (Tok::Or, 2)
            } else if c == '!' {
                (Tok::Not, 1)
            } else if c == '(' {
                (Tok::LParen, 1)
            } else if c == ')' {
                (Tok::RParen, 1)
            } else {
                return Err(ParseError::UnknownToken {
                    line,
                    column,
                    token: c.to_string(),
                });
            }
        };
        tokens.push(Token {
            tok,
            line,
            column: start_col,
        });
        i += len;
        column += len;
    }
    tokens.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            expected: expected.into(),
            found: t.tok.describe(),
        }
    }

    // Level 1: `->` (right-assoc) and `<->` (left-assoc).
    fn implication(&mut self) -> Result<LtlFormula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Implies => {
                self.bump();
                Ok(lhs.implies(self.implication()?))
            }
            Tok::Iff => {
                let mut acc = lhs;
                while *self.peek() == Tok::Iff {
                    self.bump();
                    acc = acc.iff(self.disjunction()?);
                }
                if *self.peek() == Tok::Implies {
                    self.bump();
                    acc = acc.implies(self.implication()?);
                }
                Ok(acc)
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<LtlFormula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<LtlFormula, ParseError> {
        let mut acc = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = acc.and(self.until()?);
        }
        Ok(acc)
    }

    fn until(&mut self) -> Result<LtlFormula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Until {
            self.bump();
            return Ok(lhs.until(self.until()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<LtlFormula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Next => {
                self.bump();
                Ok(self.unary()?.next())
            }
            Tok::Eventually => {
                self.bump();
                Ok(self.unary()?.eventually())
            }
            Tok::Globally => {
                self.bump();
                Ok(self.unary()?.globally())
            }
            Tok::True => {
                self.bump();
                Ok(LtlFormula::True)
            }
            Tok::False => {
                self.bump();
                Ok(LtlFormula::False)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(LtlFormula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses LTL text. Precedence from tightest: unary operators, `U`, `&&`,
/// `||`, then `->`/`<->`. `U` and `->` associate to the right.
pub fn parse_ltl(text: &str) -> Result<LtlFormula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let f = parser.implication()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}
