use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

#[test]
fn module_functions_from_python() {
    Python::attach(|py| {
        let m = wrap_pymodule!(dirac_visc_py::dirac_visc_py)(py);
        let locals = PyDict::new(py);
        locals.set_item("dv", m).unwrap();
        let code = c"
p = dv.ModelParams(disorder_a=20.0)
s = dv.solve_sigma(0.0, p)
ok = abs(s.real) < 1e-12 and s.imag < 0.0
ok = ok and dv.shear_static(0.5, p) == dv.shear_static(-0.5, p)
try:
    dv.ModelParams(disorder_a=-1.0)
    ok = False
except ValueError:
    pass
";
        py.run(code, None, Some(&locals)).unwrap();
        let ok: bool = locals.get_item("ok").unwrap().unwrap().extract().unwrap();
        assert!(ok);
    });
}
