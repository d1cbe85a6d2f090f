declare function observable(...args: any[]): any;
class A {
  @observable accessor items: string[] = [];
}
