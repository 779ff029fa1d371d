//! Deterministic SVG output for function plots and the two-dimensional
//! diagrams of ΔP.
//!
//! Geometry is computed exactly and only converted to fixed-precision decimals
//! when written. Every drawn element carries `data-*` attributes naming its
//! source so that documents can be checked structurally.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::analysis::{generate_maximal_additive_faces, subadditivity_test};
use crate::deltap::{enumerate_faces, format_point, vertex_signs, Face, IntervalOrPoint, Point};
use crate::error::{Error, Result};
use crate::pwl::{PiecewiseLinear, Side};
use crate::scalar::{format_decimal, format_rational, Scalar};

pub const GREEN: &str = "#00a000";
pub const RED: &str = "#d00000";
pub const BLUE: &str = "#0000d0";
pub const GRAY: &str = "#808080";
const GRID: &str = "#c0c0c0";
const NEUTRAL: &str = "#a0a0a0";

/// Colors handed out to distinct slopes in increasing slope order.
pub const SLOPE_PALETTE: [&str; 8] = [
    "#0000d0", "#d07000", "#008080", "#a000a0", "#806000", "#d00080", "#4060ff", "#60a000",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramMode {
    Function,
    Cones,
    Additive,
}

impl std::str::FromStr for DiagramMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "function" => Ok(DiagramMode::Function),
            "cones" => Ok(DiagramMode::Cones),
            "additive" => Ok(DiagramMode::Additive),
            other => Err(Error::Parameter(format!("unknown diagram mode {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSpec {
    pub mode: DiagramMode,
    pub colored_slopes: bool,
    pub width: u32,
    pub height: u32,
    /// Decimal places for emitted coordinates.
    pub precision: usize,
    /// Radius of vertex and endpoint markers, in pixels.
    pub marker_radius: u32,
    /// Reach of cones and rays from their apex, in pixels (L∞ norm).
    pub cone_radius: u32,
}

impl Default for DiagramSpec {
    fn default() -> Self {
        DiagramSpec {
            mode: DiagramMode::Function,
            colored_slopes: false,
            width: 480,
            height: 480,
            precision: 6,
            marker_radius: 3,
            cone_radius: 12,
        }
    }
}

impl DiagramSpec {
    pub fn with_mode(mode: DiagramMode) -> Self {
        DiagramSpec {
            mode,
            ..DiagramSpec::default()
        }
    }
}

/// Renders according to `spec.mode`.
pub fn render<T: Scalar>(function: &PiecewiseLinear<T>, spec: &DiagramSpec) -> Result<String> {
    match spec.mode {
        DiagramMode::Function => Ok(plot_function(function, spec)),
        DiagramMode::Cones => Ok(plot_2d_diagram_with_cones(function, spec)),
        DiagramMode::Additive => plot_2d_diagram(function, spec),
    }
}

struct Svg {
    body: String,
    precision: usize,
}

impl Svg {
    fn new(precision: usize) -> Self {
        Svg {
            body: String::new(),
            precision,
        }
    }

    fn num<T: Scalar>(&self, v: &T) -> String {
        format_decimal(v, self.precision)
    }

    fn element(&mut self, tag: &str, attrs: &[(&str, String)]) {
        self.body.push_str("  <");
        self.body.push_str(tag);
        for (k, v) in attrs {
            let _ = write!(self.body, " {k}=\"{}\"", escape(v));
        }
        self.body.push_str("/>\n");
    }

    fn finish(self, width: u32, height: u32) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        let _ = writeln!(out, "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>");
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('"', "&quot;").replace('<', "&lt;")
}

/// Affine map from mathematical to pixel coordinates, `(x, y) ↦ (ox + x·sx, oy − y·sy)`.
#[derive(Clone)]
struct Frame<T> {
    ox: T,
    oy: T,
    sx: T,
    sy: T,
}

impl<T: Scalar> Frame<T> {
    fn map(&self, x: &T, y: &T) -> (T, T) {
        (
            self.ox.clone() + x.clone() * self.sx.clone(),
            self.oy.clone() - y.clone() * self.sy.clone(),
        )
    }
}

fn int<T: Scalar>(n: u32) -> T {
    T::from_int(i64::from(n))
}

fn slope_colors<T: Scalar>(function: &PiecewiseLinear<T>, colored: bool) -> Vec<&'static str> {
    let slopes = function.slopes();
    if !colored {
        return vec![BLUE; slopes.len()];
    }
    let distinct: Vec<T> = slopes.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    slopes
        .iter()
        .map(|s| {
            let idx = distinct.binary_search(s).expect("slope is listed");
            SLOPE_PALETTE[idx % SLOPE_PALETTE.len()]
        })
        .collect()
}

/// Draws the graph of `function` on `[0, 1]`. `place` maps `(t, π)` to pixels.
fn draw_graph<T: Scalar>(
    svg: &mut Svg,
    function: &PiecewiseLinear<T>,
    place: &dyn Fn(&T, &T) -> (T, T),
    colored: bool,
    radius: u32,
    role: &str,
) {
    let bx = function.end_points();
    let limits = function.limits_at_end_points();
    let colors = slope_colors(function, colored);
    for i in 0..function.piece_count() {
        let (x0, y0) = place(&bx[i], &limits[i].right);
        let (x1, y1) = place(&bx[i + 1], &limits[i + 1].left);
        let d = format!("M {} {} L {} {}", svg.num(&x0), svg.num(&y0), svg.num(&x1), svg.num(&y1));
        svg.element(
            "path",
            &[
                ("d", d),
                ("stroke", colors[i].to_string()),
                ("stroke-width", "2".into()),
                ("fill", "none".into()),
                ("data-kind", "piece".into()),
                ("data-role", role.into()),
                ("data-piece", format!("[{}, {}]", format_rational(&bx[i]), format_rational(&bx[i + 1]))),
                ("data-slope", format_rational(&function.slope(i))),
            ],
        );
    }
    let last = bx.len() - 1;
    for (i, x) in bx.iter().enumerate() {
        let l = &limits[i];
        let mut sides = Vec::new();
        if i > 0 {
            sides.push(Side::Left);
        }
        if i < last {
            sides.push(Side::Right);
        }
        if sides.iter().all(|s| *l.get(*s) == l.value) {
            continue;
        }
        let (px, py) = place(x, &l.value);
        svg.element(
            "circle",
            &[
                ("cx", svg.num(&px)),
                ("cy", svg.num(&py)),
                ("r", radius.to_string()),
                ("fill", BLUE.into()),
                ("data-kind", "marker".into()),
                ("data-role", role.into()),
                ("data-fill", "filled".into()),
                ("data-at", format_rational(x)),
                ("data-side", Side::Value.symbol().into()),
                ("data-value", format_rational(&l.value)),
            ],
        );
        for s in sides {
            let v = l.get(s);
            let (px, py) = place(x, v);
            svg.element(
                "circle",
                &[
                    ("cx", svg.num(&px)),
                    ("cy", svg.num(&py)),
                    ("r", radius.to_string()),
                    ("fill", "#ffffff".into()),
                    ("stroke", BLUE.into()),
                    ("data-kind", "marker".into()),
                    ("data-role", role.into()),
                    ("data-fill", "hollow".into()),
                    ("data-at", format_rational(x)),
                    ("data-side", s.symbol().into()),
                    ("data-value", format_rational(v)),
                ],
            );
        }
    }
}

/// Plot of the function on `[0, 1]` with open and closed endpoint markers.
pub fn plot_function<T: Scalar>(function: &PiecewiseLinear<T>, spec: &DiagramSpec) -> String {
    let margin = 24u32;
    let w = spec.width.saturating_sub(2 * margin).max(1);
    let h = spec.height.saturating_sub(2 * margin).max(1);
    let frame = Frame {
        ox: int::<T>(margin),
        oy: int::<T>(margin + h),
        sx: int::<T>(w),
        sy: int::<T>(h),
    };
    let mut svg = Svg::new(spec.precision);
    let (ax0, ay0) = frame.map(&T::zero(), &T::zero());
    let (ax1, ay1) = frame.map(&T::one(), &T::one());
    svg.element(
        "rect",
        &[
            ("x", svg.num(&ax0)),
            ("y", svg.num(&ay1)),
            ("width", svg.num(&(ax1 - ax0.clone()))),
            ("height", svg.num(&(ay0 - ay1.clone()))),
            ("fill", "none".into()),
            ("stroke", GRID.into()),
            ("data-kind", "frame".into()),
        ],
    );
    draw_graph(
        &mut svg,
        function,
        &|x, y| frame.map(x, y),
        spec.colored_slopes,
        spec.marker_radius,
        "graph",
    );
    svg.finish(spec.width, spec.height)
}

/// Pixel layout of a 2D diagram: the unit square with a band on each side.
struct Layout<T> {
    square: Frame<T>,
    band: T,
    size: T,
}

impl<T: Scalar> Layout<T> {
    fn new(spec: &DiagramSpec) -> Self {
        let margin = 12u32;
        let band = (spec.width.min(spec.height) / 6).max(1);
        let size = spec.width.min(spec.height).saturating_sub(2 * (margin + band)).max(1);
        let o = margin + band;
        Layout {
            square: Frame {
                ox: int(o),
                oy: int(o + size),
                sx: int(size),
                sy: int(size),
            },
            band: int(band),
            size: int(size),
        }
    }

    fn map(&self, p: &Point<T>) -> (T, T) {
        self.square.map(&p.0, &p.1)
    }

    fn top(&self) -> T {
        self.square.oy.clone() - self.size.clone()
    }

    fn left(&self) -> T {
        self.square.ox.clone()
    }

    fn right(&self) -> T {
        self.square.ox.clone() + self.size.clone()
    }

    fn bottom(&self) -> T {
        self.square.oy.clone()
    }
}

fn draw_frame_and_borders<T: Scalar>(svg: &mut Svg, function: &PiecewiseLinear<T>, layout: &Layout<T>, spec: &DiagramSpec) {
    svg.element(
        "rect",
        &[
            ("x", svg.num(&layout.left())),
            ("y", svg.num(&layout.top())),
            ("width", svg.num(&layout.size)),
            ("height", svg.num(&layout.size)),
            ("fill", "none".into()),
            ("stroke", "#000000".into()),
            ("data-kind", "frame".into()),
        ],
    );
    let top = layout.top();
    let left = layout.left();
    let (sx, band) = (layout.size.clone(), layout.band.clone());
    draw_graph(
        svg,
        function,
        &|t, v| (left.clone() + t.clone() * sx.clone(), top.clone() - v.clone() * band.clone()),
        spec.colored_slopes,
        spec.marker_radius,
        "top",
    );
    let bottom = layout.bottom();
    draw_graph(
        svg,
        function,
        &|t, v| (left.clone() - v.clone() * band.clone(), bottom.clone() - t.clone() * sx.clone()),
        spec.colored_slopes,
        spec.marker_radius,
        "left",
    );
}

fn line<T: Scalar>(svg: &mut Svg, a: &(T, T), b: &(T, T), attrs: &[(&str, String)]) {
    let mut all = vec![
        ("x1", svg.num(&a.0)),
        ("y1", svg.num(&a.1)),
        ("x2", svg.num(&b.0)),
        ("y2", svg.num(&b.1)),
    ];
    all.extend(attrs.iter().cloned());
    svg.element("line", &all);
}

fn draw_grid<T: Scalar>(svg: &mut Svg, function: &PiecewiseLinear<T>, layout: &Layout<T>) {
    let bx = function.end_points();
    let (zero, one) = (T::zero(), T::one());
    for b in bx {
        let attrs = |dir: &str| {
            vec![
                ("stroke", GRID.to_string()),
                ("stroke-width", "1".into()),
                ("data-kind", "grid".into()),
                ("data-direction", dir.to_string()),
                ("data-at", format_rational(b)),
            ]
        };
        line(svg, &layout.map(&(b.clone(), zero.clone())), &layout.map(&(b.clone(), one.clone())), &attrs("vertical"));
        line(svg, &layout.map(&(zero.clone(), b.clone())), &layout.map(&(one.clone(), b.clone())), &attrs("horizontal"));
    }
    // Diagonals x + y = z for z ∈ B + {0, 1}, clipped to the square.
    let diagonals: BTreeSet<T> = bx.iter().flat_map(|b| [b.clone(), b.clone() + T::one()]).collect();
    for z in diagonals {
        if z.is_zero() || z == T::from_int(2) {
            continue;
        }
        let (start, end) = if z <= T::one() {
            ((zero.clone(), z.clone()), (z.clone(), zero.clone()))
        } else {
            ((z.clone() - one.clone(), one.clone()), (one.clone(), z.clone() - one.clone()))
        };
        line(
            svg,
            &layout.map(&start),
            &layout.map(&end),
            &[
                ("stroke", GRID.to_string()),
                ("stroke-width", "1".into()),
                ("data-kind", "grid".into()),
                ("data-direction", "diagonal".into()),
                ("data-at", format_rational(&z)),
            ],
        );
    }
}

fn sign_of<T: Scalar>(slack: &T) -> (&'static str, &'static str, &'static str) {
    if slack.is_negative() {
        ("negative", RED, "red")
    } else if slack.is_zero() {
        ("zero", GREEN, "green")
    } else {
        ("positive", NEUTRAL, "none")
    }
}

/// Apex plus a neighbor direction scaled to L∞ length `reach`.
fn toward<T: Scalar>(apex: &Point<T>, other: &Point<T>, reach: &T) -> Point<T> {
    let dx = other.0.clone() - apex.0.clone();
    let dy = other.1.clone() - apex.1.clone();
    let norm = dx.abs().max(dy.abs());
    let k = reach.clone() / norm;
    (apex.0.clone() + dx * k.clone(), apex.1.clone() + dy * k)
}

fn linf<T: Scalar>(a: &Point<T>, b: &Point<T>) -> T {
    (a.0.clone() - b.0.clone()).abs().max((a.1.clone() - b.1.clone()).abs())
}

fn face_attrs<T: Scalar>(face: &Face<T>) -> (&'static str, String) {
    ("data-face", face.triple.to_string())
}

/// The square with grid lines, the function on two borders, vertex dots
/// colored by the sign of Δπ and, for discontinuous functions, limit cones.
pub fn plot_2d_diagram_with_cones<T: Scalar>(function: &PiecewiseLinear<T>, spec: &DiagramSpec) -> String {
    let layout = Layout::new(spec);
    let mut svg = Svg::new(spec.precision);
    draw_grid(&mut svg, function, &layout);
    draw_frame_and_borders(&mut svg, function, &layout, spec);
    let faces = enumerate_faces(function);
    let signs = vertex_signs(function, &faces);
    if !function.is_continuous() {
        let default_reach = int::<T>(spec.cone_radius) / layout.size.clone();
        for s in signs.iter().filter(|s| s.face.dimension > 0) {
            let (tag, color, name) = sign_of(&s.slack);
            if tag == "positive" {
                continue;
            }
            let neighbors = s.face.neighbors_of(&s.vertex);
            let reach = neighbors
                .iter()
                .map(|n| linf(&s.vertex, n) / T::from_int(2))
                .fold(default_reach.clone(), |acc, r| acc.min(r));
            let ends: Vec<(T, T)> = neighbors.iter().map(|n| layout.map(&toward(&s.vertex, n, &reach))).collect();
            let apex = layout.map(&s.vertex);
            let meta = vec![
                ("data-vertex", format_point(&s.vertex)),
                face_attrs(&s.face),
                ("data-sign", tag.to_string()),
                ("data-color", name.to_string()),
                ("data-slack", format_rational(&s.slack)),
            ];
            if s.face.dimension == 1 {
                let mut attrs = vec![
                    ("stroke", color.to_string()),
                    ("stroke-width", "2".into()),
                    ("data-kind", "ray".into()),
                ];
                attrs.extend(meta);
                line(&mut svg, &apex, &ends[0], &attrs);
            } else {
                let points = std::iter::once(&apex)
                    .chain(ends.iter())
                    .map(|p| format!("{},{}", svg.num(&p.0), svg.num(&p.1)))
                    .collect::<Vec<_>>()
                    .join(" ");
                let mut attrs = vec![
                    ("points", points),
                    ("fill", color.to_string()),
                    ("fill-opacity", "0.6".into()),
                    ("data-kind", "cone".into()),
                ];
                attrs.extend(meta);
                svg.element("polygon", &attrs);
            }
        }
    }
    for s in signs.iter().filter(|s| s.face.dimension == 0) {
        let (tag, color, name) = sign_of(&s.slack);
        let (cx, cy) = layout.map(&s.vertex);
        svg.element(
            "circle",
            &[
                ("cx", svg.num(&cx)),
                ("cy", svg.num(&cy)),
                ("r", spec.marker_radius.to_string()),
                ("fill", color.to_string()),
                ("data-kind", "vertex".into()),
                ("data-vertex", format_point(&s.vertex)),
                face_attrs(&s.face),
                ("data-sign", tag.to_string()),
                ("data-color", name.to_string()),
                ("data-slack", format_rational(&s.slack)),
            ],
        );
    }
    svg.finish(spec.width, spec.height)
}

fn shadow<T: Scalar>(svg: &mut Svg, rect: [T; 4], axis: &str, face: &Face<T>, range: &IntervalOrPoint<T>) {
    let [x, y, w, h] = rect;
    svg.element(
        "rect",
        &[
            ("x", svg.num(&x)),
            ("y", svg.num(&y)),
            ("width", svg.num(&w)),
            ("height", svg.num(&h)),
            ("fill", GRAY.into()),
            ("fill-opacity", "0.5".into()),
            ("data-kind", "shadow".into()),
            ("data-axis", axis.into()),
            ("data-range", range.to_string()),
            face_attrs(face),
        ],
    );
}

fn draw_shadows<T: Scalar>(svg: &mut Svg, layout: &Layout<T>, face: &Face<T>) {
    let s = layout.size.clone();
    let band = layout.band.clone();
    let p = &face.projections;
    shadow(
        svg,
        [layout.left() + p.i.lo.clone() * s.clone(), layout.top() - band.clone(), p.i.length() * s.clone(), band.clone()],
        "x",
        face,
        &p.i,
    );
    shadow(
        svg,
        [
            layout.left() - band.clone(),
            layout.bottom() - p.j.hi.clone() * s.clone(),
            band.clone(),
            p.j.length() * s.clone(),
        ],
        "y",
        face,
        &p.j,
    );
    let one = T::one();
    if p.k.lo < one {
        let hi = p.k.hi.clone().min(one.clone());
        let part = IntervalOrPoint::new(p.k.lo.clone(), hi.clone());
        shadow(
            svg,
            [
                layout.left() + p.k.lo.clone() * s.clone(),
                layout.bottom(),
                (hi - p.k.lo.clone()) * s.clone(),
                band.clone(),
            ],
            "x+y",
            face,
            &part,
        );
    }
    if p.k.hi > one {
        let lo = p.k.lo.clone().max(one.clone());
        let part = IntervalOrPoint::new(lo.clone(), p.k.hi.clone());
        // On the right border the sum z sits at height z − 1.
        shadow(
            svg,
            [
                layout.right(),
                layout.bottom() - (p.k.hi.clone() - one.clone()) * s.clone(),
                band,
                (p.k.hi.clone() - lo) * s,
            ],
            "x+y",
            face,
            &part,
        );
    }
}

/// Maximal additive faces in green with the projections of each 2-face as
/// gray shadows. Fails when the function is not subadditive.
pub fn plot_2d_diagram<T: Scalar>(function: &PiecewiseLinear<T>, spec: &DiagramSpec) -> Result<String> {
    if !subadditivity_test(function).0 {
        return Err(Error::NotSubadditive);
    }
    let additive = generate_maximal_additive_faces(function)?;
    let layout = Layout::new(spec);
    let mut svg = Svg::new(spec.precision);
    for a in additive.of_dimension(2) {
        draw_shadows(&mut svg, &layout, &a.face);
    }
    draw_grid(&mut svg, function, &layout);
    draw_frame_and_borders(&mut svg, function, &layout, spec);
    for a in &additive.faces {
        let face = &a.face;
        let mut meta = vec![face_attrs(face), ("data-color", "green".to_string())];
        if let Some(w) = &a.witness {
            meta.push(("data-witness", w.triple.to_string()));
        }
        match face.dimension {
            2 => {
                let points = face
                    .cyclic_vertices()
                    .iter()
                    .map(|v| {
                        let (x, y) = layout.map(v);
                        format!("{},{}", svg.num(&x), svg.num(&y))
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                let mut attrs = vec![
                    ("points", points),
                    ("fill", GREEN.to_string()),
                    ("fill-opacity", "0.6".into()),
                    ("stroke", GREEN.to_string()),
                    ("data-kind", "face".into()),
                ];
                attrs.extend(meta);
                svg.element("polygon", &attrs);
            }
            1 => {
                let mut attrs = vec![
                    ("stroke", GREEN.to_string()),
                    ("stroke-width", "3".into()),
                    ("data-kind", "edge".into()),
                ];
                attrs.extend(meta);
                line(&mut svg, &layout.map(&face.vertices[0]), &layout.map(&face.vertices[1]), &attrs);
            }
            _ => {
                let (cx, cy) = layout.map(&face.vertices[0]);
                let mut attrs = vec![
                    ("cx", svg.num(&cx)),
                    ("cy", svg.num(&cy)),
                    ("r", spec.marker_radius.to_string()),
                    ("fill", GREEN.to_string()),
                    ("data-kind", "vertex".into()),
                    ("data-vertex", format_point(&face.vertices[0])),
                ];
                attrs.extend(meta);
                svg.element("circle", &attrs);
            }
        }
    }
    Ok(svg.finish(spec.width, spec.height))
}
