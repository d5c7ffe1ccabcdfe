//! Source spans and coded diagnostics.
//!
//! Diagnostic codes form a closed catalog; the CLI prints them verbatim and
//! tests match on them, so renaming a variant is a breaking change.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A 1-based line/column position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub fn new(line: u32, col: u32) -> Self {
        Pos { line, col }
    }
}

impl Serialize for Pos {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.line, self.col].serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Span {
    pub file: String,
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(file: impl Into<String>, start: Pos, end: Pos) -> Self {
        Span { file: file.into(), start, end }
    }

    /// A span that carries no location, used for synthesized declarations.
    pub fn synthetic(file: impl Into<String>) -> Self {
        Span { file: file.into(), start: Pos::new(1, 1), end: Pos::new(1, 1) }
    }

    /// Smallest span covering both `self` and `other` (same file assumed).
    pub fn to(&self, other: &Span) -> Span {
        Span {
            file: self.file.clone(),
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.file == other.file && self.start <= other.start && other.end <= self.end
    }

    pub fn contains_pos(&self, pos: Pos) -> bool {
        self.start <= pos && pos <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start.line, self.start.col)
    }
}

macro_rules! codes {
    ($($variant:ident => $text:literal),* $(,)?) => {
        /// The stable diagnostic catalog.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Code {
            $($variant),*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$variant => $text),*
                }
            }
        }
    };
}

codes! {
    Parse => "E-PARSE",
    Encoding => "E-ENCODING",
    Name => "E-NAME",
    Arity => "E-ARITY",
    TypeMismatch => "E-TYPE-MISMATCH",
    CannotInfer => "E-CANNOT-INFER",
    MissingReq => "E-MISSING-REQ",
    UnboundAssoc => "E-UNBOUND-ASSOC",
    NeedsName => "E-NEEDS-NAME",
    NoModel => "E-NO-MODEL",
    Ambiguous => "E-AMBIGUOUS",
    Depth => "E-DEPTH",
    NormDiverge => "E-NORM-DIVERGE",
    Overlap => "E-OVERLAP",
    Duplicate => "E-DUPLICATE",
    ConstructorDup => "E-CONSTRUCTOR-DUP",
    BlanketSelf => "E-BLANKET-SELF",
    BlanketDup => "E-BLANKET-DUP",
    Orphan => "E-ORPHAN",
    Cycle => "E-CYCLE",
    UnresolvedImport => "E-UNRESOLVED-IMPORT",
    LinkConflict => "E-LINK-CONFLICT",
    NoEntry => "E-NO-ENTRY",
    MultiEntry => "E-MULTI-ENTRY",
    CoreIllTyped => "E-CORE-ILLTYPED",
    RtMatch => "E-RT-MATCH",
    RtFuel => "E-RT-FUEL",
    RtDepth => "E-RT-DEPTH",
    NoGoal => "E-NO-GOAL",
    Io => "E-IO",
    Incoherent => "W-INCOHERENT",
}

impl Code {
    pub fn severity(self) -> Severity {
        if self.as_str().starts_with("W-") {
            Severity::Warning
        } else {
            Severity::Error
        }
    }

    pub fn parse(s: &str) -> Option<Code> {
        Code::ALL.iter().copied().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Related {
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub module: String,
    pub span: Span,
    pub message: String,
    pub related: Vec<Related>,
}

impl Diagnostic {
    pub fn new(code: Code, module: impl Into<String>, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: code.severity(),
            module: module.into(),
            span,
            message: message.into(),
            related: Vec::new(),
        }
    }

    pub fn with_related(mut self, span: Span, message: impl Into<String>) -> Self {
        self.related.push(Related { span, message: message.into() });
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.code, self.span, self.message)?;
        for r in &self.related {
            write!(f, "\n  note: {}: {}", r.span, r.message)?;
        }
        Ok(())
    }
}

/// Sorts diagnostics canonically and removes exact duplicates.
///
/// `module_rank` maps a module name to its topological index; unknown
/// modules sort last.
pub fn canonicalize(diags: &mut Vec<Diagnostic>, module_rank: impl Fn(&str) -> usize) {
    diags.sort_by(|a, b| {
        module_rank(&a.module)
            .cmp(&module_rank(&b.module))
            .then_with(|| a.module.cmp(&b.module))
            .then_with(|| cmp_span(&a.span, &b.span))
            .then_with(|| a.code.cmp(&b.code))
            .then_with(|| a.message.cmp(&b.message))
    });
    diags.dedup();
}

fn cmp_span(a: &Span, b: &Span) -> Ordering {
    a.file
        .cmp(&b.file)
        .then(a.start.cmp(&b.start))
        .then(a.end.cmp(&b.end))
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip_through_text() {
        for &c in Code::ALL {
            assert_eq!(Code::parse(c.as_str()), Some(c));
        }
        assert_eq!(Code::Incoherent.severity(), Severity::Warning);
        assert_eq!(Code::Overlap.severity(), Severity::Error);
    }

    #[test]
    fn json_shape() {
        let d = Diagnostic::new(
            Code::Orphan,
            "B",
            Span::new("b.sl", Pos::new(3, 1), Pos::new(3, 9)),
            "orphan model",
        )
        .with_related(Span::new("a.sl", Pos::new(1, 1), Pos::new(1, 2)), "concept here");
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["code"], "E-ORPHAN");
        assert_eq!(v["severity"], "error");
        assert_eq!(v["span"]["start"], serde_json::json!([3, 1]));
        assert_eq!(v["related"][0]["span"]["file"], "a.sl");
    }

    #[test]
    fn canonical_order_dedups() {
        let s = |l| Span::new("f.sl", Pos::new(l, 1), Pos::new(l, 2));
        let mut ds = vec![
            Diagnostic::new(Code::Overlap, "M", s(5), "x"),
            Diagnostic::new(Code::Name, "M", s(2), "y"),
            Diagnostic::new(Code::Overlap, "M", s(5), "x"),
            Diagnostic::new(Code::Name, "A", s(9), "z"),
        ];
        canonicalize(&mut ds, |m| if m == "A" { 0 } else { 1 });
        let codes: Vec<_> = ds.iter().map(|d| (d.module.as_str(), d.span.start.line)).collect();
        assert_eq!(codes, vec![("A", 9), ("M", 2), ("M", 5)]);
    }
}
