//! Static renderings of patterns: SVG figures, ASCII rasters, canonical JSON
//! and DOT graphs, selected by name through a [`Registry`].

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{Pattern, Vertex};
use crate::strategy::{Named, Registry};

/// Patterns larger than this are refused by every renderer.
pub const MAX_RENDER_VERTICES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: String,
    /// Pixels per lattice unit; only the SVG renderer reads it.
    pub scale: u32,
    pub highlight: Vec<Vertex>,
}

impl RenderSpec {
    pub fn new(format: &str) -> Self {
        RenderSpec { format: format.to_string(), scale: 10, highlight: Vec::new() }
    }

    pub fn with_scale(mut self, scale: u32) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_highlight(mut self, highlight: Vec<Vertex>) -> Self {
        self.highlight = highlight;
        self
    }
}

pub trait Renderer: Named + Send + Sync {
    fn render(&self, p: &Pattern, spec: &RenderSpec) -> Result<String>;
}

pub fn renderers() -> Registry<dyn Renderer> {
    let mut r: Registry<dyn Renderer> = Registry::new("renderer");
    r.register(Box::new(Svg)).register(Box::new(Ascii)).register(Box::new(Json)).register(Box::new(Dot));
    r
}

/// Validates `spec` and dispatches to the renderer it names.
pub fn render(p: &Pattern, spec: &RenderSpec) -> Result<String> {
    let registry = renderers();
    let renderer = registry.get(&spec.format)?;
    if p.vertex_count() > MAX_RENDER_VERTICES {
        return Err(Error::Oversize(p.vertex_count(), MAX_RENDER_VERTICES));
    }
    if spec.scale == 0 {
        return Err(Error::Precondition("scale must be a positive integer".into()));
    }
    if let Some(&h) = spec.highlight.iter().find(|&&h| !p.contains(h)) {
        return Err(Error::VertexNotInPattern(h));
    }
    renderer.render(p, spec)
}

struct Svg;

impl Named for Svg {
    fn name(&self) -> &'static str {
        "svg"
    }
}

impl Renderer for Svg {
    fn render(&self, p: &Pattern, spec: &RenderSpec) -> Result<String> {
        let s = spec.scale as i64;
        let (lo, hi) = p.bounds();
        let margin = s;
        let width = (hi.x - lo.x) * s + 2 * margin;
        let height = (hi.y - lo.y) * s + 2 * margin;
        // SVG's y axis points down.
        let px = |v: Vertex| ((v.x - lo.x) * s + margin, (hi.y - v.y) * s + margin);
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        )
        .unwrap();
        writeln!(out, r##"<g stroke="#222" stroke-width="{}" stroke-linecap="round">"##, (s / 4).max(1)).unwrap();
        for e in p.edges() {
            let (x1, y1) = px(e.a());
            let (x2, y2) = px(e.b());
            writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#).unwrap();
        }
        writeln!(out, "</g>").unwrap();
        let r = (s / 3).max(1);
        for &h in &spec.highlight {
            let (cx, cy) = px(h);
            writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="{r}" fill="#1f77b4"/>"##).unwrap();
        }
        let (cx, cy) = px(p.basepoint());
        writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="{}" fill="#d62728"/>"##, r + 1).unwrap();
        writeln!(out, "</svg>").unwrap();
        Ok(out)
    }
}

/// Vertex `(x, y)` sits at column `2(x − xmin)` and row `2(ymax − y)`; edges
/// fill the cells between. `@` is the basepoint, `*` a highlighted vertex.
struct Ascii;

impl Named for Ascii {
    fn name(&self) -> &'static str {
        "ascii"
    }
}

impl Renderer for Ascii {
    fn render(&self, p: &Pattern, spec: &RenderSpec) -> Result<String> {
        let (lo, hi) = p.bounds();
        let cols = (2 * (hi.x - lo.x) + 1) as usize;
        let rows = (2 * (hi.y - lo.y) + 1) as usize;
        let mut grid = vec![vec![b' '; cols]; rows];
        let cell = |x2: i64, y2: i64| ((2 * hi.y - y2) as usize, (x2 - 2 * lo.x) as usize);
        for e in p.edges() {
            let (a, b) = (e.a(), e.b());
            let (r, c) = cell(a.x + b.x, a.y + b.y);
            grid[r][c] = if a.y == b.y { b'-' } else { b'|' };
        }
        let marked: BTreeSet<Vertex> = spec.highlight.iter().copied().collect();
        for v in p.vertices() {
            let (r, c) = cell(2 * v.x, 2 * v.y);
            grid[r][c] = if v == p.basepoint() {
                b'@'
            } else if marked.contains(&v) {
                b'*'
            } else {
                b'o'
            };
        }
        let mut out = String::with_capacity(rows * (cols + 1));
        for row in grid {
            let line = String::from_utf8(row).expect("ascii");
            out.push_str(line.trim_end());
            out.push('\n');
        }
        Ok(out)
    }
}

struct Json;

impl Named for Json {
    fn name(&self) -> &'static str {
        "json"
    }
}

impl Renderer for Json {
    fn render(&self, p: &Pattern, _spec: &RenderSpec) -> Result<String> {
        let mut s = p.to_canonical_json();
        s.push('\n');
        Ok(s)
    }
}

struct Dot;

impl Named for Dot {
    fn name(&self) -> &'static str {
        "dot"
    }
}

impl Renderer for Dot {
    fn render(&self, p: &Pattern, spec: &RenderSpec) -> Result<String> {
        let id = |v: Vertex| format!("\"{},{}\"", v.x, v.y);
        let mut out = String::from("graph pattern {\n  node [shape=point];\n");
        for v in p.vertices() {
            let attrs = if v == p.basepoint() {
                " [color=red, width=0.12]"
            } else if spec.highlight.contains(&v) {
                " [color=blue]"
            } else {
                ""
            };
            writeln!(out, "  {} [pos=\"{},{}!\"]{attrs};", id(v), v.x, v.y).unwrap();
        }
        for e in p.edges() {
            writeln!(out, "  {} -- {};", id(e.a()), id(e.b())).unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }
}
