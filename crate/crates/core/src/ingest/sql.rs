//! Streaming reader for MediaWiki SQL dumps (`INSERT INTO ... VALUES (...),(...);`).
//!
//! The reader walks the byte stream with a small state machine and never
//! holds more than one tuple in memory. Lines that do not start with
//! `INSERT INTO` (DDL, comments, `LOCK TABLES`, ...) are skipped.

use std::io::{BufRead, ErrorKind};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SqlError {
    #[error("truncated input at byte {offset}")]
    Truncated { offset: u64 },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: u64, message: String },
    #[error("tuple at byte {offset} has {found} fields, column {column} requested")]
    MissingColumn {
        offset: u64,
        found: usize,
        column: usize,
    },
    #[error("read error at byte {offset}: {message}")]
    Io { offset: u64, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    LineStart,
    SkipLine,
    SeekValues,
    BetweenTuples,
    Done,
}

/// Iterator over the selected columns of every tuple in a dump.
pub struct SqlTuples<R> {
    reader: R,
    columns: Vec<usize>,
    offset: u64,
    state: State,
    tuples: u64,
}

impl<R: BufRead> SqlTuples<R> {
    pub fn tuples_read(&self) -> u64 {
        self.tuples
    }

    pub fn bytes_read(&self) -> u64 {
        self.offset
    }

    fn peek(&mut self) -> Result<Option<u8>, SqlError> {
        loop {
            match self.reader.fill_buf() {
                Ok(buf) => return Ok(buf.first().copied()),
                Err(e) if e.kind() == ErrorKind::Interrupted => continue,
                Err(e) => {
                    return Err(SqlError::Io {
                        offset: self.offset,
                        message: e.to_string(),
                    })
                }
            }
        }
    }

    fn bump(&mut self) -> Result<Option<u8>, SqlError> {
        let b = self.peek()?;
        if b.is_some() {
            self.reader.consume(1);
            self.offset += 1;
        }
        Ok(b)
    }

    fn skip_ws(&mut self) -> Result<Option<u8>, SqlError> {
        while let Some(b) = self.peek()? {
            if !b.is_ascii_whitespace() {
                return Ok(Some(b));
            }
            self.bump()?;
        }
        Ok(None)
    }

    /// Consumes bytes matching `word` (ASCII case-insensitive); returns false
    /// on the first mismatch, leaving the mismatching byte unread.
    fn eat_word(&mut self, word: &[u8]) -> Result<bool, SqlError> {
        for &w in word {
            match self.peek()? {
                Some(b) if b.eq_ignore_ascii_case(&w) => {
                    self.bump()?;
                }
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    fn skip_to_line_end(&mut self) -> Result<(), SqlError> {
        loop {
            let (found, used) = {
                let buf = match self.reader.fill_buf() {
                    Ok(buf) => buf,
                    Err(e) if e.kind() == ErrorKind::Interrupted => continue,
                    Err(e) => {
                        return Err(SqlError::Io {
                            offset: self.offset,
                            message: e.to_string(),
                        })
                    }
                };
                if buf.is_empty() {
                    return Ok(());
                }
                match buf.iter().position(|&b| b == b'\n') {
                    Some(i) => (true, i + 1),
                    None => (false, buf.len()),
                }
            };
            self.reader.consume(used);
            self.offset += used as u64;
            if found {
                return Ok(());
            }
        }
    }

    /// Scans past the table name and optional column list up to and
    /// including the `VALUES` keyword.
    fn seek_values(&mut self) -> Result<bool, SqlError> {
        let mut in_backtick = false;
        let mut depth = 0u32;
        loop {
            let Some(b) = self.peek()? else {
                return Ok(false);
            };
            match b {
                b'`' => in_backtick = !in_backtick,
                b'(' if !in_backtick => depth += 1,
                b')' if !in_backtick => depth = depth.saturating_sub(1),
                b'V' | b'v' if !in_backtick && depth == 0 => {
                    if self.eat_word(b"VALUES")? {
                        return Ok(true);
                    }
                    continue;
                }
                b'\n' if !in_backtick => {
                    return Err(SqlError::Syntax {
                        offset: self.offset,
                        message: "INSERT statement without VALUES".into(),
                    })
                }
                _ => {}
            }
            self.bump()?;
        }
    }

    fn read_quoted(&mut self, out: &mut Vec<u8>) -> Result<(), SqlError> {
        loop {
            match self.bump()? {
                None => {
                    return Err(SqlError::Truncated {
                        offset: self.offset,
                    })
                }
                Some(b'\\') => {
                    let esc = self.bump()?.ok_or(SqlError::Truncated {
                        offset: self.offset,
                    })?;
                    out.push(match esc {
                        b'0' => 0,
                        b'n' => b'\n',
                        b'r' => b'\r',
                        b't' => b'\t',
                        b'b' => 0x08,
                        b'Z' => 0x1a,
                        other => other,
                    });
                }
                Some(b'\'') => {
                    if self.peek()? == Some(b'\'') {
                        self.bump()?;
                        out.push(b'\'');
                    } else {
                        return Ok(());
                    }
                }
                Some(b) => out.push(b),
            }
        }
    }

    /// Parses one `( ... )` group; the opening parenthesis is already consumed.
    fn read_tuple(&mut self, start: u64) -> Result<Vec<String>, SqlError> {
        let mut fields: Vec<Vec<u8>> = Vec::new();
        loop {
            let mut field = Vec::new();
            match self.skip_ws()? {
                None => return Err(SqlError::Truncated { offset: start }),
                Some(b'\'') => {
                    self.bump()?;
                    self.read_quoted(&mut field)
                        .map_err(|_| SqlError::Truncated { offset: start })?;
                }
                Some(_) => loop {
                    match self.peek()? {
                        None => return Err(SqlError::Truncated { offset: start }),
                        Some(b',') | Some(b')') => break,
                        Some(b) if b.is_ascii_whitespace() => {
                            self.bump()?;
                        }
                        Some(b) => {
                            field.push(b);
                            self.bump()?;
                        }
                    }
                },
            }
            fields.push(field);
            match self.skip_ws()? {
                None => return Err(SqlError::Truncated { offset: start }),
                Some(b',') => {
                    self.bump()?;
                }
                Some(b')') => {
                    self.bump()?;
                    break;
                }
                Some(other) => {
                    return Err(SqlError::Syntax {
                        offset: self.offset,
                        message: format!("unexpected byte {:?} in tuple", other as char),
                    })
                }
            }
        }
        self.columns
            .iter()
            .map(|&c| {
                fields
                    .get(c)
                    .map(|f| String::from_utf8_lossy(f).into_owned())
                    .ok_or(SqlError::MissingColumn {
                        offset: start,
                        found: fields.len(),
                        column: c,
                    })
            })
            .collect()
    }

    fn advance(&mut self) -> Result<Option<Vec<String>>, SqlError> {
        loop {
            match self.state {
                State::Done => return Ok(None),
                State::LineStart => {
                    if self.peek()?.is_none() {
                        self.state = State::Done;
                        continue;
                    }
                    if self.eat_word(b"INSERT INTO")? {
                        self.state = State::SeekValues;
                    } else {
                        self.state = State::SkipLine;
                    }
                }
                State::SkipLine => {
                    self.skip_to_line_end()?;
                    self.state = State::LineStart;
                }
                State::SeekValues => {
                    if self.seek_values()? {
                        self.state = State::BetweenTuples;
                    } else {
                        self.state = State::Done;
                        return Err(SqlError::Truncated {
                            offset: self.offset,
                        });
                    }
                }
                State::BetweenTuples => match self.skip_ws()? {
                    None => {
                        self.state = State::Done;
                        return Err(SqlError::Truncated {
                            offset: self.offset,
                        });
                    }
                    Some(b'(') => {
                        let start = self.offset;
                        self.bump()?;
                        let tuple = self.read_tuple(start)?;
                        self.tuples += 1;
                        return Ok(Some(tuple));
                    }
                    Some(b',') => {
                        self.bump()?;
                    }
                    Some(b';') => {
                        self.bump()?;
                        self.state = State::SkipLine;
                    }
                    Some(other) => {
                        return Err(SqlError::Syntax {
                            offset: self.offset,
                            message: format!("unexpected byte {:?} between tuples", other as char),
                        })
                    }
                },
            }
        }
    }
}

impl<R: BufRead> Iterator for SqlTuples<R> {
    type Item = Result<Vec<String>, SqlError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.advance() {
            Ok(Some(t)) => Some(Ok(t)),
            Ok(None) => None,
            Err(e) => {
                match e {
                    SqlError::Truncated { .. } | SqlError::Io { .. } => self.state = State::Done,
                    // resynchronise on the next statement
                    SqlError::Syntax { .. } => self.state = State::SkipLine,
                    SqlError::MissingColumn { .. } => {}
                }
                Some(Err(e))
            }
        }
    }
}

/// Streams the `column_spec` positions of every tuple in `dump`.
pub fn parse_sql_insert_tuples<R: BufRead>(dump: R, column_spec: &[usize]) -> SqlTuples<R> {
    SqlTuples {
        reader: dump,
        columns: column_spec.to_vec(),
        offset: 0,
        state: State::LineStart,
        tuples: 0,
    }
}
