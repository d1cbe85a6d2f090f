#!/usr/bin/env node
// Labels TypeScript snippets with feature ids by walking the AST produced by
// the reference compiler. Used once to freeze the corpus manifest:
//
//   npm install typescript@4.9.5
//   node tools/label-corpus.js crates/core/tests/corpus
//
// With --json FILE..., prints one {file, features, diagnostics} line per file
// instead (handy for differential checks against arbitrary sources).
'use strict';
const fs = require('fs');
const path = require('path');
const ts = require('typescript');

const K = ts.SyntaxKind;

function hasModifier(node, kind) {
  const mods = ts.canHaveModifiers && ts.canHaveModifiers(node) ? ts.getModifiers(node) : node.modifiers;
  return !!mods && mods.some((m) => m.kind === kind);
}

function label(source) {
  const sf = ts.createSourceFile('snippet.ts', source, ts.ScriptTarget.Latest, true, ts.ScriptKind.TS);
  const found = new Set();
  const visit = (n) => {
    switch (n.kind) {
      case K.SatisfiesExpression:
        found.add('f0');
        break;
      case K.PropertyDeclaration:
        if (hasModifier(n, K.AccessorKeyword)) found.add('f1');
        break;
      case K.InferType:
        if (n.typeParameter.constraint) found.add('f2');
        break;
      case K.TypeParameter: {
        const p = n.parent;
        const owner = p && [K.InterfaceDeclaration, K.TypeAliasDeclaration, K.ClassDeclaration, K.ClassExpression].includes(p.kind);
        if (owner && (hasModifier(n, K.InKeyword) || hasModifier(n, K.OutKeyword))) found.add('f3');
        break;
      }
      case K.ImportSpecifier:
      case K.ExportSpecifier:
        if (n.isTypeOnly) found.add('f4');
        break;
      case K.ImportDeclaration:
      case K.ExportDeclaration:
        if (n.assertClause) found.add('f5');
        break;
      case K.ClassStaticBlockDeclaration:
        found.add('f6');
        break;
      case K.ConstructorType:
        if (hasModifier(n, K.AbstractKeyword)) found.add('f8');
        break;
      case K.TemplateLiteralType:
        found.add('f9');
        break;
      case K.MappedType:
        if (n.nameType) found.add('f10');
        break;
      case K.NamedTupleMember:
        found.add('f11');
        break;
      case K.BinaryExpression: {
        const op = n.operatorToken.kind;
        if (op === K.AmpersandAmpersandEqualsToken || op === K.BarBarEqualsToken || op === K.QuestionQuestionEqualsToken) {
          found.add('f12');
        }
        break;
      }
    }
    if (hasModifier(n, K.OverrideKeyword)) {
      const p = n.parent;
      const classMember = p && (p.kind === K.ClassDeclaration || p.kind === K.ClassExpression);
      const ctorParam = n.kind === K.Parameter && p && p.kind === K.Constructor;
      if (classMember || ctorParam) found.add('f7');
    }
    ts.forEachChild(n, visit);
  };
  visit(sf);
  const order = (f) => Number(f.slice(1));
  return {
    features: [...found].sort((a, b) => order(a) - order(b)),
    diagnostics: sf.parseDiagnostics.map((d) => ts.flattenDiagnosticMessageText(d.messageText, ' ')),
  };
}

function main(argv) {
  if (argv[0] === '--json') {
    for (const file of argv.slice(1)) {
      const r = label(fs.readFileSync(file, 'utf8'));
      process.stdout.write(JSON.stringify({ file, features: r.features, diagnostics: r.diagnostics.length }) + '\n');
    }
    return 0;
  }
  const dir = argv[0];
  if (!dir) {
    console.error('usage: label-corpus.js CORPUS_DIR | --json FILE...');
    return 1;
  }
  const snippetDir = path.join(dir, 'snippets');
  const files = fs.readdirSync(snippetDir).filter((f) => f.endsWith('.ts')).sort();
  const manifest = { labeler: `typescript@${ts.version}`, snippets: {} };
  let bad = 0;
  for (const f of files) {
    const r = label(fs.readFileSync(path.join(snippetDir, f), 'utf8'));
    if (r.diagnostics.length) {
      console.error(`${f}: parse diagnostics: ${r.diagnostics.join('; ')}`);
      bad++;
    }
    manifest.snippets[f] = r.features;
  }
  fs.writeFileSync(path.join(dir, 'manifest.json'), JSON.stringify(manifest, null, 2) + '\n');
  console.error(`labeled ${files.length} snippets with typescript@${ts.version}`);
  return bad ? 2 : 0;
}

process.exit(main(process.argv.slice(2)));
