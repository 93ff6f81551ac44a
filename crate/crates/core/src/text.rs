use crate::error::ParseError;
use crate::extended::ExtendedValue;

/// A whitespace-separated token with its 1-based position.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    pub fn parse_usize(&self, what: &str) -> Result<usize, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found {:?}", self.text)))
    }

    pub fn parse_f64(&self, what: &str) -> Result<f64, ParseError> {
        match self.text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.error(format!("expected {what}, found {:?}", self.text))),
        }
    }

    /// A decimal literal or `-inf`.
    pub fn parse_extended(&self) -> Result<ExtendedValue, ParseError> {
        if self.text == "-inf" {
            return Ok(ExtendedValue::NEG_INFINITY);
        }
        let x = self.parse_f64("a decimal or -inf")?;
        Ok(ExtendedValue::finite(x).expect("finite"))
    }
}

/// Non-blank lines split into tokens.
pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last_line: 0,
        }
    }

    fn tokenize(line_no: usize, line: &'a str) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push(Token {
                        text: &line[s..i],
                        line: line_no,
                        column: line[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    /// Next non-blank line, or an error naming `what` at end of input.
    pub fn next_line(&mut self, what: &str) -> Result<Vec<Token<'a>>, ParseError> {
        for (i, line) in self.inner.by_ref() {
            self.last_line = i + 1;
            let tokens = Self::tokenize(i + 1, line);
            if !tokens.is_empty() {
                return Ok(tokens);
            }
        }
        Err(ParseError::new(
            self.last_line + 1,
            1,
            format!("unexpected end of input, expected {what}"),
        ))
    }

    /// Next line, which must hold exactly `count` tokens.
    pub fn next_exact(&mut self, count: usize, what: &str) -> Result<Vec<Token<'a>>, ParseError> {
        let tokens = self.next_line(what)?;
        if tokens.len() != count {
            let at = tokens.get(count).unwrap_or(&tokens[tokens.len() - 1]);
            return Err(at.error(format!(
                "expected {count} entries for {what}, found {}",
                tokens.len()
            )));
        }
        Ok(tokens)
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        for (i, line) in self.inner.by_ref() {
            if let Some(t) = Self::tokenize(i + 1, line).first() {
                return Err(t.error("unexpected trailing content"));
            }
        }
        Ok(())
    }
}

/// All tokens of a free-form whitespace-separated file.
pub(crate) fn tokens(text: &str) -> Vec<Token<'_>> {
    text.lines()
        .enumerate()
        .flat_map(|(i, line)| Lines::tokenize(i + 1, line))
        .collect()
}
