import random
from dataclasses import replace

import pytest

from Corpus_Audit.corpus.corpus_model import Example, SourceLanguage, corpus_from_sources
from Corpus_Audit.errors import ConfigError
from Corpus_Audit.features.catalog import ElementaryCatalog, default_catalog, load_catalog
from Corpus_Audit.features.detectors import (
    CastingConfidence,
    FeatureTag,
    Tier,
    assign_tier,
    detect_class_definitions,
    detect_features,
    histogram_of,
    profiles_frame,
    tier_histogram,
)
from Corpus_Audit.features.functions import CallSiteKind, call_sites, classify_calls, extract_functions, qualifier_chain
from Corpus_Audit.lexing.lexkit import lex

JAVA = SourceLanguage.JAVA
CPP = SourceLanguage.CPP
PYTHON = SourceLanguage.PYTHON


def example(source, language=JAVA, index=0):
    return Example(index=index, raw=source, source=source, language=language)


def profile(source, language=JAVA):
    return detect_features(example(source, language))


def calls(source, language=JAVA):
    item = example(source, language)
    return classify_calls(item, extract_functions(item))


# catalog


def test_catalog_sections():
    java = default_catalog(JAVA)
    assert "for" in java.control
    assert "boolean" in java.types
    assert "Math" in java.math_qualifiers
    assert "System.out.println" in java.io
    assert "sqrt" in default_catalog(CPP).math_functions
    assert "range" in default_catalog(PYTHON).functions


def test_catalog_round_trip_keeps_fingerprint():
    java = default_catalog(JAVA)
    assert ElementaryCatalog.from_dict(java.to_dict()) == java
    assert ElementaryCatalog.from_dict(java.to_dict()).fingerprint() == java.fingerprint()
    assert java.fingerprint() != default_catalog(CPP).fingerprint()


def test_load_catalog_missing_section(tmp_path):
    path = tmp_path / "catalog.yaml"
    path.write_text("java:\n  elementary: {}\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="cpp"):
        load_catalog(CPP, path)


def test_load_catalog_custom_vocabulary(tmp_path):
    path = tmp_path / "catalog.yaml"
    path.write_text("java:\n  elementary:\n    control: [if]\n  sophisticated:\n    control_extras: [for]\n", encoding="utf-8")
    catalog = load_catalog(JAVA, path)
    item = example("static void f ( int n ) { for ( ; ; ) { } }")
    assert FeatureTag.CONTROL_EXTRA in detect_features(item, catalog).sophisticated_features


# functions


def test_diagonal_sums_java_function(diagonal_corpus):
    item = diagonal_corpus(JAVA).examples[0]
    (definition,) = extract_functions(item)
    assert definition.name == "printDiagonalSums"
    assert definition.parameter_count == 2
    assert classify_calls(item, [definition]) == {CallSiteKind.LIBRARY: 2}


def test_diagonal_sums_cpp_and_python_functions(diagonal_corpus):
    cpp = diagonal_corpus(CPP).examples[0]
    python = diagonal_corpus(PYTHON).examples[0]
    assert [(d.name, d.parameter_count) for d in extract_functions(cpp)] == [("printDiagonalSums", 2)]
    assert [(d.name, d.parameter_count) for d in extract_functions(python)] == [("printDiagonalSums", 2)]
    assert classify_calls(cpp, extract_functions(cpp)) == {}
    assert classify_calls(python, extract_functions(python)) == {CallSiteKind.LIBRARY: 4}


def test_extract_functions_empty_source():
    assert extract_functions(example("")) == []


def test_extract_two_functions_in_order():
    defs = extract_functions(example("int helper ( int a ) { return a ; } int main2 ( int b , int c ) { return helper ( b ) ; }"))
    assert [(d.name, d.parameter_count) for d in defs] == [("helper", 1), ("main2", 2)]


def test_generic_parameters_count_once():
    (definition,) = extract_functions(example("static int f ( Map < Integer , List < Integer >> m , int k ) { return k ; }"))
    assert definition.parameter_count == 2


def test_throws_clause_is_part_of_the_header():
    (definition,) = extract_functions(example("static void f ( ) throws Exception { g ( ) ; }"))
    assert definition.name == "f"


def test_self_recursion():
    assert calls("static int fib ( int n ) { if ( n <= 1 ) return n ; return fib ( n - 1 ) + fib ( n - 2 ) ; }") == {CallSiteKind.SELF_RECURSIVE: 2}


def test_cross_call_between_user_functions():
    assert calls("int g(){return h();} int h(){return 0;}") == {CallSiteKind.USER_CROSS: 1}


def test_unresolved_call_is_not_library():
    assert calls("static int f ( int n ) { return gcd ( n , 2 ) ; }") == {CallSiteKind.UNRESOLVED: 1}


def test_this_qualifier_is_ignored():
    assert calls("int f ( int n ) { return this . f ( n - 1 ) ; }") == {CallSiteKind.SELF_RECURSIVE: 1}


def test_qualified_calls_are_library():
    assert calls("int f ( int [ ] a ) { Arrays . sort ( a ) ; return a [ 0 ] ; }") == {CallSiteKind.LIBRARY: 1}


def test_cpp_declaration_is_not_a_call():
    source = "int f ( int n ) { vector < int > v ( n ) ; int x ( 5 ) ; return v . size ( ) + x ; }"
    assert calls(source, CPP) == {CallSiteKind.LIBRARY: 1}


def test_python_self_recursion_and_library():
    source = "def fact ( n ) :\n    if n <= 1 :\n        return 1\n    return n * fact ( n - 1 )\n"
    assert calls(source, PYTHON) == {CallSiteKind.SELF_RECURSIVE: 1}
    assert calls("def f ( a ) :\n    print ( len ( a ) )\n", PYTHON) == {CallSiteKind.LIBRARY: 2}


def test_qualifier_chain():
    tokens = lex("System.out.println(x); a[i].length();", JAVA)
    assert qualifier_chain(tokens, 4) == ["System", "out"]
    assert qualifier_chain(tokens, 14) == ["<expr>"]


def test_call_sites_record_caller_and_line():
    item = example("int g ( ) {\n  return h ( ) ;\n}\nint h ( ) { return 0 ; }")
    (site,) = call_sites(item, extract_functions(item), default_catalog(JAVA))
    assert (site.callee, site.kind, site.line, site.caller) == ("h", CallSiteKind.USER_CROSS, 2, "g")


# detectors


@pytest.mark.parametrize(
    ("sophisticated", "math", "recursion", "tier"),
    [
        (False, False, False, Tier.ELEMENTARY),
        (False, True, False, Tier.ELEMENTARY_PLUS_MATH),
        (False, False, True, Tier.ELEMENTARY_PLUS_RECURSION),
        (False, True, True, Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION),
        (True, True, True, Tier.SOPHISTICATED),
    ],
)
def test_assign_tier(sophisticated, math, recursion, tier):
    assert assign_tier(sophisticated, math, recursion) is tier


@pytest.mark.parametrize("language", [JAVA, CPP, PYTHON])
def test_diagonal_sums_listings_are_elementary(language, diagonal_corpus):
    result = detect_features(diagonal_corpus(language).examples[0])
    assert result.tier is Tier.ELEMENTARY
    assert result.elementary_only
    assert result.sophisticated_features == frozenset()


def test_math_library_use():
    result = profile("static int larger ( int a , int b ) { return Math . max ( a , b ) ; }")
    assert result.uses_math_library
    assert result.tier is Tier.ELEMENTARY_PLUS_MATH


def test_math_and_recursion():
    result = profile("static int f ( int n ) { if ( n == 0 ) return 0 ; return Math . abs ( n ) + f ( n - 1 ) ; }")
    assert result.tier is Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION


def test_switch_is_sophisticated():
    result = profile("static int g ( int x ) { switch ( x ) { case 1 : return 1 ; default : return 0 ; } }")
    assert result.tier is Tier.SOPHISTICATED
    assert result.sophisticated_features == frozenset({FeatureTag.CONTROL_EXTRA})


@pytest.mark.parametrize(
    ("source", "language", "tag"),
    [
        ("static int h ( int x ) { return x & 1 ; }", JAVA, FeatureTag.BITWISE),
        ("static int h ( int x ) { return x >> 1 ; }", JAVA, FeatureTag.BITWISE),
        ("static void f ( int [ ] a ) { Arrays . sort ( a ) ; }", JAVA, FeatureTag.WRAPPER_CLASS_STATICS),
        ("static int f ( String s ) { return Integer . parseInt ( s ) ; }", JAVA, FeatureTag.WRAPPER_CLASS_STATICS),
        ("static boolean f ( String a , String b ) { return a . equals ( b ) ; }", JAVA, FeatureTag.BUILTIN_METHODS),
        ("static int f ( ) { ArrayList < Integer > a = new ArrayList < > ( ) ; return a . size ( ) ; }", JAVA, FeatureTag.LIBRARY_GENERICS),
        ("static int f ( double d ) { return ( int ) d ; }", JAVA, FeatureTag.CASTING),
        ("static void f ( ) { try { g ( ) ; } catch ( Exception e ) { } }", JAVA, FeatureTag.EXCEPTION_HANDLING),
        ("class A { int f ( ) { return 0 ; } }", JAVA, FeatureTag.CLASS_DEFINITION),
        ("static void f ( ) { do { } while ( true ) ; }", JAVA, FeatureTag.CONTROL_EXTRA),
        ("static int f ( ) { synchronized ( this ) { return 1 ; } }", JAVA, FeatureTag.OTHER),
        ("int f ( int x ) { return x > INT_MAX ? 0 : x ; }", CPP, FeatureTag.WRAPPER_CLASS_STATICS),
        ("void f ( int a [ ] , int n ) { sort ( a , a + n ) ; }", CPP, FeatureTag.BUILTIN_METHODS),
        ("int f ( double d ) { return static_cast < int > ( d ) ; }", CPP, FeatureTag.CASTING),
        ("def f ( a ) :\n    return sorted ( a )\n", PYTHON, FeatureTag.BUILTIN_METHODS),
        ("def f ( a ) :\n    try :\n        return a\n    except :\n        return 0\n", PYTHON, FeatureTag.EXCEPTION_HANDLING),
        ("def f ( a ) :\n    return a ^ 1\n", PYTHON, FeatureTag.BITWISE),
    ],
)
def test_sophisticated_features(source, language, tag):
    result = profile(source, language)
    assert tag in result.sophisticated_features
    assert result.tier is Tier.SOPHISTICATED


@pytest.mark.parametrize(
    ("source", "language"),
    [
        ("void f ( int n ) { cout << n << endl ; cin >> n ; }", CPP),
        ("int sum ( vector < int > & v ) { return 0 ; }", CPP),
        ("void f ( map < int , vector < int >> & m ) { }", CPP),
        ("static int f ( int a ) { return a && a || ! a ? 1 : 0 ; }", JAVA),
        ("static int f ( String s ) { return s . charAt ( 0 ) - 48 ; }", JAVA),
        ("static int f ( int [ ] a ) { return a . length ; }", JAVA),
        ("void f ( int n ) { std :: cout << n << std :: endl ; }", CPP),
    ],
)
def test_elementary_lookalikes(source, language):
    result = profile(source, language)
    assert FeatureTag.BITWISE not in result.sophisticated_features
    assert FeatureTag.BUILTIN_METHODS not in result.sophisticated_features


def test_cout_statement_is_elementary():
    assert profile("void f ( int n ) { cout << n << endl ; }", CPP).tier is Tier.ELEMENTARY


@pytest.mark.parametrize(
    ("source", "language"),
    [
        ("def f ( n ) :\n    print ( n )\n    return n >> 1\n", PYTHON),
        ("def f ( n ) :\n    print ( n << 2 )\n", PYTHON),
        ('void f ( int a ) { printf ( "%d" , a << 1 ) ; }', CPP),
        ("void f ( int a ) { puts ( \"x\" ) ; a = a >> 1 ; }", CPP),
        ("void f ( int a ) { cout << a ; a = a >> 1 ; }", CPP),
    ],
)
def test_output_calls_do_not_hide_shifts(source, language):
    result = profile(source, language)
    assert FeatureTag.BITWISE in result.sophisticated_features
    assert result.tier is Tier.SOPHISTICATED


def test_stream_statement_ends_with_the_python_line():
    catalog = replace(default_catalog(PYTHON), streams=frozenset({"out"}))
    item = example("def f ( n ) :\n    out << n\n    return n\n", PYTHON)
    assert FeatureTag.BITWISE not in detect_features(item, catalog).sophisticated_features
    item = example("def f ( n ) :\n    out << n\n    return n >> 1\n", PYTHON)
    assert FeatureTag.BITWISE in detect_features(item, catalog).sophisticated_features


def test_streams_are_cpp_only():
    assert default_catalog(CPP).streams == frozenset({"cout", "cin", "cerr", "clog"})
    assert default_catalog(JAVA).streams == frozenset()
    assert default_catalog(PYTHON).streams == frozenset()


def test_java_catalog_is_the_first_month_vocabulary():
    java = default_catalog(JAVA)
    assert java.types >= {"int", "float", "double", "boolean", "char", "String"}
    assert java.types.isdisjoint({"long", "short", "byte"})
    assert java.methods == frozenset({"charAt"})


def test_long_and_string_length_are_not_elementary():
    result = profile("static long f ( long n ) { return n * 2 ; }")
    assert result.tier is Tier.SOPHISTICATED
    assert result.other_constructs == ("long",)
    result = profile("static int f ( String s ) { return s . length ( ) ; }")
    assert result.sophisticated_features == frozenset({FeatureTag.BUILTIN_METHODS})


def test_multidimensional_arrays_are_elementary():
    assert profile("static int f ( int [ ] [ ] [ ] a ) { return a [ 0 ] [ 0 ] [ 0 ] ; }").tier is Tier.ELEMENTARY


@pytest.mark.parametrize(
    ("source", "language"),
    [
        ("static void f ( ) { try { g ( ) ; } catch ( Exception e ) { } }", JAVA),
        ("void f ( ) { try { g ( ) ; } catch ( ... ) { } }", CPP),
        ("def f ( a ) :\n    try :\n        return a\n    except :\n        return 0\n", PYTHON),
    ],
)
def test_try_catch_is_extra_control_and_exception_handling(source, language):
    features = profile(source, language).sophisticated_features
    assert {FeatureTag.CONTROL_EXTRA, FeatureTag.EXCEPTION_HANDLING} <= features


def test_casting_confidence():
    assert profile("static int f ( double d ) { return ( int ) d ; }").casting_confidence is CastingConfidence.HIGH
    assert profile("static Integer f ( Object o ) { return ( Integer ) o ; }").casting_confidence is CastingConfidence.LOW
    assert profile("def f ( s ) :\n    return int ( s )\n", PYTHON).casting_confidence is CastingConfidence.LOW
    assert profile("static int f ( int a ) { return ( a ) + 1 ; }").casting_confidence is CastingConfidence.NONE


def test_user_cross_calls_are_listed_for_review():
    result = profile("int g ( ) { return h ( ) ; } int h ( ) { return 0 ; }")
    assert result.user_cross_callees == ("h",)
    assert result.other_constructs == ("calls h",)
    assert FeatureTag.OTHER in result.sophisticated_features


def test_unresolved_calls_do_not_change_the_tier():
    result = profile("static int f ( int n ) { return gcd ( n , 2 ) ; }")
    assert result.call_histogram == {CallSiteKind.UNRESOLVED: 1}
    assert result.tier is Tier.ELEMENTARY


def test_keywords_in_literals_are_ignored():
    assert profile('static String s ( ) { String t = "class switch try" ; return t ; }').tier is Tier.ELEMENTARY


def test_class_definitions():
    corpus = corpus_from_sources(['String s = "class" ; // class', "class A { }", "int a ;\nclass B { }"], JAVA)
    assert detect_class_definitions(corpus) == (2, [(1, 1), (2, 2)])


def test_tier_histogram(java_corpus):
    histogram = tier_histogram(java_corpus)
    assert histogram == {
        Tier.ELEMENTARY: 3,
        Tier.ELEMENTARY_PLUS_MATH: 1,
        Tier.ELEMENTARY_PLUS_RECURSION: 1,
        Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION: 1,
        Tier.SOPHISTICATED: 2,
    }
    assert sum(tier_histogram(java_corpus, first_n=5).values()) == 5


def test_tier_histogram_python_and_cpp(python_corpus, cpp_corpus):
    assert tier_histogram(python_corpus) == {
        Tier.ELEMENTARY: 2,
        Tier.ELEMENTARY_PLUS_MATH: 1,
        Tier.ELEMENTARY_PLUS_RECURSION: 1,
        Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION: 0,
        Tier.SOPHISTICATED: 0,
    }
    assert tier_histogram(cpp_corpus) == {
        Tier.ELEMENTARY: 1,
        Tier.ELEMENTARY_PLUS_MATH: 1,
        Tier.ELEMENTARY_PLUS_RECURSION: 0,
        Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION: 0,
        Tier.SOPHISTICATED: 2,
    }


def test_histogram_of_empty():
    assert histogram_of([]) == dict.fromkeys(Tier, 0)


def test_profiles_frame(java_corpus):
    frame = profiles_frame(detect_features(item) for item in java_corpus.examples)
    assert len(frame) == 8
    assert list(frame["tier"])[:3] == ["Elementary", "ElementaryPlusMath", "ElementaryPlusRecursion"]
    assert frame.loc[2, "SelfRecursive"] == 2
    assert frame.loc[4, "sophisticated_features"] == "ControlExtra"


# adding a sophisticated construct never lowers the tier

SOPHISTICATED_SNIPPETS = {
    JAVA: [
        "int q = 1 << 2 ;",
        "while ( true ) { break ; }",
        "do { } while ( false ) ;",
        "Arrays . sort ( a ) ;",
        "String t = ( String ) o ;",
        "try { } catch ( Exception e ) { }",
        "ArrayList < Integer > l = new ArrayList < > ( ) ;",
        "boolean e = s . equals ( t ) ;",
        "int m = Integer . MAX_VALUE ;",
    ],
    CPP: [
        "x = y & 1 ;",
        "switch ( x ) { default : break ; }",
        "int z = static_cast < int > ( y ) ;",
        "sort ( a , a + n ) ;",
        "vector < int > w ;",
        "struct P { } ;",
    ],
    PYTHON: ["x = y & 1", "break", "x = sorted ( y )", "raise ValueError ( )", "assert x", "x = y >> 2"],
}


def insert_braced(rng, source, snippet):
    """Put ``snippet`` after a random ``;`` or ``{`` that is outside any parentheses."""
    words = source.split(" ")
    depth, points = 0, []
    for index, word in enumerate(words):
        depth += (word == "(") - (word == ")")
        if word in (";", "{") and depth == 0:
            points.append(index + 1)
    point = rng.choice(points)
    return " ".join([*words[:point], snippet, *words[point:]])


def insert_line(rng, source, snippet):
    """Put ``snippet`` on a new line indented like a random non-empty body line."""
    lines = source.split("\n")
    point = rng.choice([index for index, line in enumerate(lines) if index and line.strip()])
    indent = lines[point][: len(lines[point]) - len(lines[point].lstrip())]
    return "\n".join([*lines[:point], indent + snippet, *lines[point:]])


def test_adding_a_sophisticated_construct_is_monotone(java_corpus, cpp_corpus, python_corpus):
    rng = random.Random(20260418)
    order = list(Tier)
    for corpus in (java_corpus, cpp_corpus, python_corpus):
        language = corpus.language
        for item in corpus.examples:
            before = detect_features(item)
            for _ in range(6):
                snippet = rng.choice(SOPHISTICATED_SNIPPETS[language])
                insert = insert_line if language is PYTHON else insert_braced
                after = profile(insert(rng, item.source, snippet), language)
                assert after.tier is Tier.SOPHISTICATED, (item.source, snippet)
                assert before.sophisticated_features <= after.sophisticated_features, (item.source, snippet)
                assert order.index(after.tier) >= order.index(before.tier)
