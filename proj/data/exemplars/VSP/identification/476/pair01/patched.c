int lookup_value(struct list *list, const char *key)
{
    struct item *it = find(list, key);
    return it ? it->value : -1;
}
