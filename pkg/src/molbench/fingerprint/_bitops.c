/* Popcount kernels for fingerprint similarity.
 *
 * Operates on raw little-endian uint64 word buffers so no numpy C API is
 * needed; callers hand in contiguous buffers and wrap the returned bytes.
 */

#define PY_SSIZE_T_CLEAN
#include <Python.h>
#include <stdint.h>
#include <stdlib.h>
#include <string.h>

#if defined(_MSC_VER)
#include <intrin.h>
static inline uint64_t popcount64(uint64_t x) { return __popcnt64(x); }
#else
static inline uint64_t popcount64(uint64_t x) { return (uint64_t)__builtin_popcountll(x); }
#endif

static PyObject *
popcount_buffer(PyObject *self, PyObject *args)
{
    Py_buffer buf;
    if (!PyArg_ParseTuple(args, "y*", &buf))
        return NULL;
    const uint64_t *words = (const uint64_t *)buf.buf;
    Py_ssize_t n = buf.len / 8;
    uint64_t total = 0;
    for (Py_ssize_t i = 0; i < n; i++)
        total += popcount64(words[i]);
    PyBuffer_Release(&buf);
    return PyLong_FromUnsignedLongLong(total);
}

/* bulk_tanimoto(query_words, matrix_words, n_rows, n_words) -> bytes(n_rows * f64) */
static PyObject *
bulk_tanimoto(PyObject *self, PyObject *args)
{
    Py_buffer query, matrix;
    Py_ssize_t n_rows, n_words;
    if (!PyArg_ParseTuple(args, "y*y*nn", &query, &matrix, &n_rows, &n_words))
        return NULL;
    if (query.len < n_words * 8 || matrix.len < n_rows * n_words * 8) {
        PyBuffer_Release(&query);
        PyBuffer_Release(&matrix);
        PyErr_SetString(PyExc_ValueError, "buffer too small for stated shape");
        return NULL;
    }
    const uint64_t *q = (const uint64_t *)query.buf;
    const uint64_t *m = (const uint64_t *)matrix.buf;

    PyObject *out = PyBytes_FromStringAndSize(NULL, n_rows * (Py_ssize_t)sizeof(double));
    if (!out) {
        PyBuffer_Release(&query);
        PyBuffer_Release(&matrix);
        return NULL;
    }
    double *scores = (double *)PyBytes_AS_STRING(out);

    uint64_t q_pop = 0;
    for (Py_ssize_t w = 0; w < n_words; w++)
        q_pop += popcount64(q[w]);

    for (Py_ssize_t row = 0; row < n_rows; row++) {
        const uint64_t *r = m + row * n_words;
        uint64_t inter = 0, r_pop = 0;
        for (Py_ssize_t w = 0; w < n_words; w++) {
            inter += popcount64(q[w] & r[w]);
            r_pop += popcount64(r[w]);
        }
        uint64_t uni = q_pop + r_pop - inter;
        scores[row] = uni ? (double)inter / (double)uni : 0.0;
    }
    PyBuffer_Release(&query);
    PyBuffer_Release(&matrix);
    return out;
}

/* pairwise_tanimoto(a_words, b_words, n_pairs, n_words) -> bytes(n_pairs * f64)
 * Scores row i of a against row i of b. */
static PyObject *
pairwise_tanimoto(PyObject *self, PyObject *args)
{
    Py_buffer a, b;
    Py_ssize_t n_pairs, n_words;
    if (!PyArg_ParseTuple(args, "y*y*nn", &a, &b, &n_pairs, &n_words))
        return NULL;
    if (a.len < n_pairs * n_words * 8 || b.len < n_pairs * n_words * 8) {
        PyBuffer_Release(&a);
        PyBuffer_Release(&b);
        PyErr_SetString(PyExc_ValueError, "buffer too small for stated shape");
        return NULL;
    }
    const uint64_t *pa = (const uint64_t *)a.buf;
    const uint64_t *pb = (const uint64_t *)b.buf;

    PyObject *out = PyBytes_FromStringAndSize(NULL, n_pairs * (Py_ssize_t)sizeof(double));
    if (!out) {
        PyBuffer_Release(&a);
        PyBuffer_Release(&b);
        return NULL;
    }
    double *scores = (double *)PyBytes_AS_STRING(out);

    for (Py_ssize_t i = 0; i < n_pairs; i++) {
        const uint64_t *ra = pa + i * n_words;
        const uint64_t *rb = pb + i * n_words;
        uint64_t inter = 0, uni = 0;
        for (Py_ssize_t w = 0; w < n_words; w++) {
            inter += popcount64(ra[w] & rb[w]);
            uni += popcount64(ra[w] | rb[w]);
        }
        scores[i] = uni ? (double)inter / (double)uni : 0.0;
    }
    PyBuffer_Release(&a);
    PyBuffer_Release(&b);
    return out;
}

static PyMethodDef methods[] = {
    {"popcount_buffer", popcount_buffer, METH_VARARGS,
     "Total set bits across a little-endian uint64 buffer."},
    {"bulk_tanimoto", bulk_tanimoto, METH_VARARGS,
     "Tanimoto of one query row against a row-major matrix."},
    {"pairwise_tanimoto", pairwise_tanimoto, METH_VARARGS,
     "Row-wise Tanimoto between two equal-shape matrices."},
    {NULL, NULL, 0, NULL}};

static struct PyModuleDef module = {
    PyModuleDef_HEAD_INIT, "_bitops", "popcount kernels", -1, methods};

PyMODINIT_FUNC
PyInit__bitops(void)
{
    return PyModule_Create(&module);
}
